#include "soliton/reference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/differentiation/autodiff.hpp>

namespace soliton {

namespace {

using boost::math::differentiation::make_fvar;
using Jet2 = boost::math::differentiation::autodiff_v1::detail::fvar<double, 2>;

constexpr double kInf = std::numeric_limits<double>::infinity();
const double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0), s2 = std::sqrt(2.0);

struct Value2 {
    double v, d1, d2;
};

Value2 values(const Jet2& x) { return {x.derivative(0), x.derivative(1), x.derivative(2)}; }

// Builds the phase jet from closed-form f_i(t) and u'(t) = up_slope * t.
template <class F>
std::function<PhaseJet(double)> from_metric(F f, double up_slope = 0.0) {
    return [f, up_slope](double t) {
        const auto fs = f(make_fvar<double, 2>(t));
        std::array<Value2, 3> v;
        for (int i = 0; i < 3; ++i) v[i] = values(fs[i]);
        PhaseJet j;
        j.metric.t = t;
        j.metric.u_prime = up_slope * t;
        PhaseVector& y = j.state.v;
        PhaseVector& d = j.derivative;
        j.state.t = t;
        double sumL = 0.0, sumdL = 0.0;
        for (int i = 0; i < 3; ++i) {
            j.metric.f[i] = v[i].v;
            j.metric.df[i] = v[i].d1;
            const double L = v[i].d1 / v[i].v;
            y[kL + i] = L;
            d[kL + i] = v[i].d2 / v[i].v - L * L;
            sumL += L;
            sumdL += d[kL + i];
        }
        for (int i = 0; i < 3; ++i) {
            const int a = (i + 1) % 3, b = (i + 2) % 3;
            y[kR + i] = v[i].v / (v[a].v * v[b].v);
            d[kR + i] = y[kR + i] * (y[kL + i] - y[kL + a] - y[kL + b]);
        }
        y[kXi] = sumL - up_slope * t;
        d[kXi] = sumdL - up_slope;
        return j;
    };
}

template <class T>
std::array<T, 3> same(const T& x) {
    return {x, x, x};
}

PhaseJet beta0_jet(double t) {
    // x = e^{sqrt3 t}
    const auto tt = make_fvar<double, 2>(t);
    const auto x = exp(s3 * tt);
    const auto xi = s3 * (x * x + 1.0) / (x * x - 1.0);
    const auto L1 = (x * x + 4.0 * x + 1.0) / (s3 * (x * x - 1.0));
    const auto L2 = (x - 1.0) / (s3 * (x + 1.0));
    // f1 with f1'(0) = 1, so R2 = R3 = 1 / f1
    const auto f1 = std::cbrt(2.0) / s3 * exp(tt / s3) * (x - 1.0) / x * pow(x / (x + 1.0), 1.0 / 3.0);
    const auto R2 = 1.0 / f1;
    PhaseJet j;
    j.state.t = t;
    PhaseVector& y = j.state.v;
    PhaseVector& d = j.derivative;
    y[kXi] = xi.derivative(0);
    d[kXi] = xi.derivative(1);
    y[kL] = L1.derivative(0);
    d[kL] = L1.derivative(1);
    y[kL + 1] = y[kL + 2] = L2.derivative(0);
    d[kL + 1] = d[kL + 2] = L2.derivative(1);
    y[kR] = d[kR] = 0.0;
    y[kR + 1] = y[kR + 2] = R2.derivative(0);
    d[kR + 1] = d[kR + 2] = R2.derivative(1);
    j.metric.t = t;
    j.metric.f = {f1.derivative(0), kInf, kInf};
    j.metric.df = {f1.derivative(1), kInf, kInf};
    j.metric.u_prime = 0.0;
    return j;
}

std::vector<NamedSolution> build_catalog() {
    std::vector<NamedSolution> c;
    auto fixed = [](double lambda, double a1, double a2, double a3) {
        return SolitonParams(lambda, FixedPoint{{a1, a2, a3}});
    };
    auto bolt = [](double lambda, int n, double beta, double gamma) {
        return SolitonParams(lambda, Bolt{n, 0.0, beta, gamma});
    };

    c.push_back({"hyperbolic", -1.0, 0.0, kInf, System::Su2, fixed(-1.0, 1.0 / 9, 1.0 / 9, 1.0 / 9), {}, {},
                 from_metric([](auto t) { return same(s3 * sinh(t / s3)); })});
    c.push_back({"gaussian_expander", -1.0, 0.0, kInf, System::Su2, fixed(-1.0, 0.0, 0.0, 0.0), {}, {},
                 from_metric([](auto t) { return same(t); }, -1.0)});
    c.push_back({"gaussian_shrinker", 1.0, 0.0, kInf, System::Su2, fixed(1.0, 0.0, 0.0, 0.0), {}, {},
                 from_metric([](auto t) { return same(t); }, 1.0)});
    c.push_back({"beta0_einstein", -1.0, 0.0, kInf, System::ReducedBeta0, bolt(-1.0, 1, 0.0, 0.0), {}, {},
                 beta0_jet});
    c.push_back({"kahler_einstein_R4", -1.0, 0.0, kInf, System::Su2, fixed(-1.0, 2.0 / 9, 1.0 / 18, 1.0 / 18), {},
                 {}, from_metric([](auto t) {
                     const auto s = sinh(t / s6);
                     return std::array{s6 * s * cosh(t / s6), s6 * s, s6 * s};
                 })});
    c.push_back({"round_s4_so3", 1.0, 0.0, s3 * M_PI / 3.0, System::Su2, bolt(1.0, 4, 1.0 / 9, 2.0 / 3),
                 bolt(1.0, 4, 1.0 / 9, 2.0 / 3), ClosingSpec::bolt(4), from_metric([](auto t) {
                     const auto sn = sin(t / s3), cs = cos(t / s3);
                     return std::array{4.0 * s3 * sn, 6.0 * cs + 2.0 * s3 * sn, 6.0 * cs - 2.0 * s3 * sn};
                 })});
    c.push_back({"fubini_study_so3", 1.0, 0.0, s6 * M_PI / 4.0, System::Su2, bolt(1.0, 4, 1.0 / 3, s6 / 3.0),
                 bolt(1.0, 2, 1.0 / 12, 1.0 / 4), ClosingSpec::bolt(2), from_metric([](auto t) {
                     return std::array{2.0 * s6 * sin(s6 * t / 3.0), 2.0 * s6 * cos(M_PI / 4.0 - t / s6),
                                       2.0 * s6 * sin(M_PI / 4.0 - t / s6)};
                 })});
    c.push_back({"round_s4_fixed", 1.0, 0.0, s3 * M_PI, System::Su2, fixed(1.0, -1.0 / 9, -1.0 / 9, -1.0 / 9),
                 fixed(1.0, -1.0 / 9, -1.0 / 9, -1.0 / 9), ClosingSpec::fixed_point(),
                 from_metric([](auto t) { return same(s3 * sin(t / s3)); })});
    c.push_back({"fubini_study_su2", 1.0, 0.0, s6 * M_PI / 2.0, System::Su2,
                 fixed(1.0, -2.0 / 9, -1.0 / 18, -1.0 / 18), bolt(1.0, 1, 1.0 / 6, 0.0), ClosingSpec::bolt(1),
                 from_metric([](auto t) {
                     const auto s = s6 * sin(t / s6);
                     return std::array{0.5 * s6 * sin(s6 * t / 3.0), s, s};
                 })});
    c.push_back({"s2xs2", 1.0, 0.0, s2 * M_PI / 2.0, System::Su2, bolt(1.0, 2, 0.25, 0.25),
                 bolt(1.0, 2, 0.25, 0.25), ClosingSpec::bolt(2), from_metric([](auto t) {
                     return std::array{2.0 * s2 * sin(t / s2), 2.0 * s2 + 0.0 * t, 2.0 * s2 * cos(t / s2)};
                 })});
    return c;
}

}  // namespace

const std::vector<NamedSolution>& catalog() {
    static const std::vector<NamedSolution> c = build_catalog();
    return c;
}

std::vector<std::string> catalog_names() {
    std::vector<std::string> out;
    for (const auto& s : catalog()) out.push_back(s.name);
    return out;
}

const NamedSolution& lookup(const std::string& name) {
    for (const auto& s : catalog())
        if (s.name == name) return s;
    throw std::out_of_range("unknown reference solution '" + name + "'");
}

Evaluation evaluate(const std::string& name, double t) {
    const NamedSolution& s = lookup(name);
    if (!(t > s.t_lo && t < s.t_hi)) throw std::out_of_range("t outside the interval of '" + name + "'");
    const PhaseJet j = s.jet(t);
    return {j.metric, j.state};
}

double residual(const NamedSolution& s, int points) {
    const double hi = std::isfinite(s.t_hi) ? s.t_hi : 10.0;
    double worst = 0.0;
    for (int k = 0; k < points; ++k) {
        const double t = s.t_lo + (hi - s.t_lo) * (k + 0.5) / points;
        const PhaseJet j = s.jet(t);
        const PhaseVector r = rhs(s.system, j.state.v, s.lambda);
        for (int i = 0; i < 7; ++i)
            worst = std::max(worst, std::abs(j.derivative[i] - r[i]) / (1.0 + std::abs(r[i])));
    }
    return worst;
}

}  // namespace soliton
