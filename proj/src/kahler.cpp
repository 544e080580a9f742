#include "soliton/kahler.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "soliton/flow.hpp"
#include "soliton/numerics.hpp"
#include "soliton/shooter.hpp"

namespace soliton {

namespace {

using GL = boost::math::quadrature::gauss<double, 30>;
using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// d/dF of f^4 (f')^2 e^{-CF/2}
double w(double s, double C) { return 0.5 * s * (4.0 - s) * std::exp(-0.5 * C * s); }

double poly(double F, double C) { return C * C * F * (F - 4.0) + 4.0 * C * (F - 2.0) + 8.0; }

// mean of w over the segment [a, b]
double mean_w(double a, double b, double C) {
    return GL::integrate([&](double u) { return w(a + 0.5 * (u + 1.0) * (b - a), C); }, -1.0, 1.0) * 0.5;
}

// int_a^b w, closed form once the segment is long enough that it does not cancel
double w_integral(double a, double b, double C) {
    if (C != 0.0 && std::abs(C * (b - a)) > 2.0)
        return (std::exp(-0.5 * C * b) * poly(b, C) - std::exp(-0.5 * C * a) * poly(a, C)) / (C * C * C);
    return (b - a) * mean_w(a, b, C);
}

// W(F) / F^2 for the vanishing anchor: int_0^1 u (4 - uF)/2 e^{-CuF/2} du
double vanishing_ratio(double F, double C) {
    return 0.5 * GL::integrate(
                     [&](double x) {
                         const double u = 0.5 * (x + 1.0);
                         return u * 0.5 * (4.0 - u * F) * std::exp(-0.5 * C * u * F);
                     },
                     -1.0, 1.0);
}

double integrate(const std::function<double(double)>& g, double a, double b) {
    if (a == b) return 0.0;
    return GK::integrate(g, a, b, 6, 1e-13);
}

bool is_vanishing(const KahlerBoundary& b) { return std::holds_alternative<Vanishing>(b); }

double boundary_n(const KahlerBoundary& b) {
    if (const auto* i = std::get_if<BoltInc>(&b)) return i->n;
    if (const auto* d = std::get_if<BoltDec>(&b)) return d->n;
    return 1.0;
}

double boundary_q(const KahlerBoundary& b) {
    if (const auto* i = std::get_if<BoltInc>(&b)) return i->q;
    if (const auto* d = std::get_if<BoltDec>(&b)) return d->q;
    return 0.0;
}

}  // namespace

std::string describe(const KahlerBoundary& b) {
    std::ostringstream os;
    os.precision(17);
    if (is_vanishing(b))
        os << "vanishing";
    else if (const auto* i = std::get_if<BoltInc>(&b))
        os << "bolt_inc n=" << i->n << " q=" << i->q;
    else {
        const auto& d = std::get<BoltDec>(b);
        os << "bolt_dec n=" << d.n << " q=" << d.q;
    }
    return os.str();
}

double anchor_square(const KahlerBoundary& b) {
    if (is_vanishing(b)) return 0.0;
    const double n = boundary_n(b), q = boundary_q(b);
    if (!(n > 0.0) || !(q > 0.0)) throw std::invalid_argument("kahler boundary: n and q must be positive");
    if (std::holds_alternative<BoltInc>(b)) {
        if (!(q > 0.5 * n)) throw std::invalid_argument("kahler boundary: BoltInc needs q > n/2");
        return 4.0 - 2.0 * n / q;
    }
    return 4.0 + 2.0 * n / q;
}

bool is_orbifold(const KahlerBoundary& b) {
    if (is_vanishing(b)) return false;
    const double q = boundary_q(b);
    return q != 1.0 && std::floor(q) == q;
}

double kahler_first_integral(double f, double C, double D) {
    const double F = f * f;
    if (C == 0.0) return 1.0 - F / 6.0 + D / (F * F);
    // f^4 (f')^2 e^{-CF/2} = int_0^F w + (8 - 8C)/C^3 + D
    const double g0 = w_integral(0.0, F, C);
    const double K = (8.0 - 8.0 * C) / (C * C * C) + D;
    return std::exp(0.5 * C * F) * (g0 + K) / (F * F);
}

double boundary_constant(const KahlerBoundary& b, double C) {
    const double Fa = anchor_square(b);
    if (C == 0.0) return -(Fa * Fa - Fa * Fa * Fa / 6.0);
    return -std::exp(-0.5 * C * Fa) * poly(Fa, C) / (C * C * C);
}

// h1 --------------------------------------------------------------------------

namespace {

// h1(x) / x^3 by its Taylor series
double h1_reduced_series(double x, double k1, double k2) {
    const double s = k1 + k2;
    double sum = 0.0, term_scale = s / 6.0;  // s^{l-2} x^{l-3} / l! at l = 3
    for (int l = 3; l < 80; ++l) {
        const double kappa = l * (l - 1.0) * k2 * (2.0 + k2) - 2.0 * l * (1.0 + k2) * s + 2.0 * s * s;
        const double term = term_scale * kappa;
        sum += term;
        if (l > 6 && std::abs(term) < 1e-18 * std::abs(sum)) break;
        term_scale *= s * x / (l + 1);
    }
    return sum;
}

double h1_direct(double x, double k1, double k2) {
    return std::exp((k1 + k2) * x) * (k2 * (2.0 + k2) * x * x - 2.0 * (1.0 + k2) * x + 2.0) +
           k1 * (2.0 - k1) * x * x + 2.0 * (1.0 - k1) * x - 2.0;
}

double h1_reduced(double x, double k1, double k2) {
    if (std::abs((k1 + k2) * x) < 1.0) return h1_reduced_series(x, k1, k2);
    return h1_direct(x, k1, k2) / (x * x * x);
}

double h2_reduced_series(double a, double L) {
    // c_m = -8 (-L/2)^{m-1} (1 - L/(2m)) / (m-1)!
    double sum = 0.0, p = 0.25 * L * L / 2.0;  // (-L/2)^{m-1}/(m-1)! at m = 3
    double apow = 1.0;
    for (int m = 3; m < 80; ++m) {
        const double term = -8.0 * p * (1.0 - L / (2.0 * m)) * apow;
        sum += term;
        if (m > 6 && std::abs(term) < 1e-18 * std::abs(sum)) break;
        p *= -0.5 * L / m;
        apow *= a;
    }
    return sum;
}

double h2_direct(double a, double L) {
    return L * (L - 4.0) * a * a - 4.0 * (L - 2.0) * a + 8.0 - (8.0 * a + 8.0) * std::exp(-0.5 * L * a);
}

double h2_reduced(double a, double L) {
    if (std::abs(L * a) < 2.0) return h2_reduced_series(a, L);
    return h2_direct(a, L) / (a * a * a);
}

std::vector<double> nonzero(const std::vector<double>& roots) {
    std::vector<double> out;
    for (double r : roots)
        if (std::abs(r) > 1e-6) out.push_back(r);
    return out;
}

}  // namespace

double h1(double x, double k1, double k2) {
    if (std::abs((k1 + k2) * x) < 1.0) return x * x * x * h1_reduced_series(x, k1, k2);
    return h1_direct(x, k1, k2);
}

double h1_third_derivative_at_zero(double k1, double k2) {
    const double s = k1 + k2;
    return s * (6.0 * k2 * (2.0 + k2) - 6.0 * s * (1.0 + k2) + 2.0 * s * s);
}

std::vector<double> h1_nonzero_roots(double k1, double k2) {
    return nonzero(scan_roots([&](double x) { return h1_reduced(x, k1, k2); }, -20.0, 20.0, 1e-3));
}

double h2(double alpha, double L) {
    if (std::abs(L * alpha) < 2.0) return alpha * alpha * alpha * h2_reduced_series(alpha, L);
    return h2_direct(alpha, L);
}

std::vector<double> h2_nonzero_roots(double L) {
    return nonzero(scan_roots([&](double a) { return h2_reduced(a, L); }, -20.0, 20.0, 1e-3));
}

double einstein_partner(double k1) { return 0.5 * (-(3.0 - k1) + std::sqrt(3.0 * (1.0 + k1) * (3.0 - k1))); }

int count_solitons(int n, double q1, double q2) {
    const double h = 0.5 * n;
    if (q1 <= h && q2 <= h) return 0;
    if (q1 > h && q2 > h && q1 != q2) return 2;
    return 1;
}

int count_solitons_numeric(int n, double q1, double q2) {
    std::vector<std::pair<double, double>> orders{{q1, q2}};
    if (q1 != q2) orders.push_back({q2, q1});
    int m = 0;
    for (auto [qa, qb] : orders) {
        const double ka = n / qa, kb = n / qb;
        if (!(ka < 2.0)) continue;
        if (!h1_nonzero_roots(ka, kb).empty() || std::abs(h1_third_derivative_at_zero(ka, kb)) < 1e-10) ++m;
    }
    return m;
}

ConeConstant complete_cone_constant(double n, double q) {
    const double k = n / q;
    if (!(k > 0.0 && k < 2.0)) throw std::invalid_argument("complete_cone_constant: needs 0 < n/q < 2");
    // positive root of k(2-k) C^2 - 2(1-k) C - 2 = 0
    const double r = std::sqrt(1.0 + 2.0 * k - k * k);
    ConeConstant cc;
    cc.C = 2.0 / (r - (1.0 - k));
    cc.degenerate = k < 1e-6;
    return cc;
}

const char* profile_case_name(ProfileCase c) {
    switch (c) {
        case ProfileCase::Compact: return "compact";
        case ProfileCase::Complete: return "complete";
        case ProfileCase::Incomplete: return "incomplete";
        case ProfileCase::Singular: return "singular";
    }
    return "?";
}

// Profile ---------------------------------------------------------------------

namespace {

bool has_far_anchor(const KahlerProfile& p) { return p.kind == ProfileCase::Compact && p.Fb > 0.0; }

// dt/dsigma with f = f_anchor + s sigma^2, anchored at F_anchor where W vanishes
double sigma_integrand(double sigma, double fa, int s, double C) {
    const double f = fa + s * sigma * sigma;
    const double F = f * f;
    const double mw = std::abs(mean_w(fa * fa, F, C));
    return 2.0 * F / std::sqrt(std::exp(0.5 * C * F) * (f + fa) * mw);
}

// e^{-CF/2} (f')^2, kept separate so large F does not overflow
double scaled_P(const KahlerProfile& p, double f) {
    const double F = f * f;
    if (is_vanishing(p.start) && (!has_far_anchor(p) || std::abs(F - p.Fa) <= std::abs(F - p.Fb)))
        return p.C * F > 2.0 ? w_integral(0.0, F, p.C) / (F * F) : vanishing_ratio(F, p.C);
    double anchor = p.Fa;
    if (has_far_anchor(p) && std::abs(F - p.Fb) < std::abs(F - p.Fa)) anchor = p.Fb;
    if (F == anchor) return 0.0;
    return w_integral(anchor, F, p.C) / (F * F);
}

double inv_speed(const KahlerProfile& p, double f) {
    const double F = f * f;
    if (p.kind == ProfileCase::Complete && F - p.Fa > 0.5) return 1.0 / std::sqrt(p.P(f));
    return std::exp(-0.25 * p.C * F) / std::sqrt(scaled_P(p, f));
}

}  // namespace

double KahlerProfile::P(double f) const {
    const double F = f * f;
    if (kind == ProfileCase::Complete && F - Fa > 0.5) return poly(F, C) / (C * C * C * F * F);
    return std::exp(0.5 * C * F) * scaled_P(*this, f);
}

double KahlerProfile::dP(double f) const {
    const double F = f * f;
    const double p = P(f);
    // dP/dF = (C/2 - 2/F) P + (4 - F)/(2F)
    return 2.0 * f * (0.5 * C * p) + (4.0 - F - 4.0 * p) / f;
}

double KahlerProfile::t_of(double f) const {
    const double fa = f_start;
    const int s = orientation;
    auto from_start = [&](double x) {
        if (is_vanishing(start)) return integrate([&](double y) { return inv_speed(*this, y); }, 0.0, x);
        const double sig = std::sqrt(std::abs(x - fa));
        return integrate([&](double v) { return sigma_integrand(v, fa, s, C); }, 0.0, sig);
    };
    if (kind == ProfileCase::Compact && has_far_anchor(*this)) {
        const double fmid = 0.5 * (fa + f_end);
        if ((f - fmid) * s <= 0.0) return from_start(f);
        const double sig = std::sqrt(std::abs(f_end - f));
        return T - integrate([&](double v) { return sigma_integrand(v, f_end, -s, C); }, 0.0, sig);
    }
    if (kind == ProfileCase::Complete) {
        const double fs = std::sqrt(Fa + 0.5);
        if (f <= fs) return from_start(f);
        return from_start(fs) + integrate([&](double y) { return inv_speed(*this, y); }, fs, f);
    }
    return from_start(f);
}

double KahlerProfile::f_at(double t) const {
    if (t <= 0.0) return f_start;
    if (std::isfinite(T) && t >= T) return f_end;
    double lo = f_start, hi;
    if (std::isfinite(f_end)) {
        hi = f_end;
    } else {
        hi = f_start + 1.0;
        while (t_of(hi) < t) hi = f_start + 2.0 * (hi - f_start);
    }
    if (hi < lo) std::swap(lo, hi);
    return bracket_root([&](double f) { return t_of(f) - t; }, lo, hi, 1e-14);
}

KahlerProfile build_profile(const KahlerBoundary& start, double C, int nsamples) {
    KahlerProfile p;
    p.start = start;
    p.C = C;
    p.Fa = anchor_square(start);
    p.f_start = std::sqrt(p.Fa);
    p.D = boundary_constant(start, C);
    const bool dec = std::holds_alternative<BoltDec>(start);
    p.orientation = dec ? -1 : 1;
    if (!dec && p.Fa >= 4.0) throw std::invalid_argument("build_profile: no metric, (f')^2 < 0 next to the boundary");
    const double n = boundary_n(start);

    // W anchored at Fa, for F on the far side
    auto W = [&](double F) {
        if (p.Fa == 0.0 && C * F <= 2.0) return F * F * vanishing_ratio(F, C);
        return w_integral(p.Fa, F, C);
    };
    const double tolW = 1e-10;

    if (!dec) {
        // W grows up to F = 4 and then decreases
        bool root = C <= 0.0;
        if (C > 0.0) {
            const double winf = -std::exp(-0.5 * C * p.Fa) * poly(p.Fa, C) / (C * C * C);
            const double scale = std::abs(C * C * p.Fa * (p.Fa - 4.0)) + std::abs(4.0 * C * (p.Fa - 2.0)) + 8.0;
            if (std::abs(poly(p.Fa, C)) <= tolW * scale)
                p.kind = ProfileCase::Complete;
            else if (winf < 0.0)
                root = true;
            else
                p.kind = ProfileCase::Incomplete;
        }
        if (root) {
            double hi = 8.0;
            while (W(hi) >= 0.0) {
                hi *= 2.0;
                if (hi > 1e4) throw std::runtime_error("build_profile: far root not bracketed");
            }
            p.Fb = bracket_root(W, std::max(4.0, p.Fa), hi, 1e-15);
            p.kind = ProfileCase::Compact;
            p.f_end = std::sqrt(p.Fb);
            p.far = BoltDec{n, n / (0.5 * (p.Fb - 4.0))};
        }
    } else {
        const double w0 = W(0.0);
        if (w0 < -tolW) {
            p.Fb = bracket_root(W, 0.0, 4.0, 1e-15);
            p.kind = ProfileCase::Compact;
            p.f_end = std::sqrt(p.Fb);
            p.far = BoltInc{n, n / (0.5 * (4.0 - p.Fb))};
        } else if (w0 <= tolW) {
            p.kind = ProfileCase::Compact;
            p.Fb = 0.0;
            p.f_end = 0.0;
            p.far = Vanishing{};
        } else {
            p.kind = ProfileCase::Singular;
            p.f_end = 0.0;
        }
    }

    // lengths
    const int s = p.orientation;
    std::vector<KahlerSample> left, right;
    auto sample_from = [&](double fa, int dir, double sig_max, int count, std::vector<KahlerSample>& out, bool vanish) {
        double t = 0.0, prev = 0.0;
        for (int i = 0; i <= count; ++i) {
            const double v = sig_max * i / count;
            if (vanish) {
                t += integrate([&](double y) { return inv_speed(p, y); }, prev, v);
                out.push_back({t, v, 0.0});
            } else {
                t += integrate([&](double x) { return sigma_integrand(x, fa, dir, C); }, prev, v);
                out.push_back({t, fa + dir * v * v, 0.0});
            }
            prev = v;
        }
    };
    const int half = std::max(4, nsamples / 2);
    if (p.kind == ProfileCase::Compact) {
        const double fmid = 0.5 * (p.f_start + p.f_end);
        const bool vstart = is_vanishing(start);
        sample_from(p.f_start, s, vstart ? fmid : std::sqrt(std::abs(fmid - p.f_start)), half, left, vstart);
        if (p.Fb > 0.0) {
            sample_from(p.f_end, -s, std::sqrt(std::abs(p.f_end - fmid)), half, right, false);
        } else {
            // vanishing far end
            double t = 0.0, prev = 0.0;
            for (int i = 0; i <= half; ++i) {
                const double v = fmid * i / half;
                t += integrate([&](double y) { return inv_speed(p, y); }, prev, v);
                right.push_back({t, v, 0.0});
                prev = v;
            }
        }
        p.T = left.back().t + right.back().t;
        p.samples = left;
        for (int i = static_cast<int>(right.size()) - 2; i >= 0; --i)
            p.samples.push_back({p.T - right[i].t, right[i].f, 0.0});
    } else if (p.kind == ProfileCase::Singular) {
        sample_from(p.f_start, s, std::sqrt(p.f_start) * (1.0 - 1e-9), 2 * half, left, false);
        p.samples = left;
        p.T = p.t_of(0.0);
    } else {
        // noncompact, f increasing without bound
        p.f_end = kInf;
        const double fmax = p.f_start + 10.0;
        if (is_vanishing(start)) {
            sample_from(0.0, 1, fmax, 2 * half, left, true);
        } else {
            sample_from(p.f_start, 1, std::sqrt(fmax - p.f_start), 2 * half, left, false);
        }
        p.samples = left;
        if (p.kind == ProfileCase::Complete) {
            p.T = kInf;
        } else {
            p.T = left.back().t + integrate([&](double y) { return inv_speed(p, y); }, fmax, kInf);
        }
    }
    for (auto& smp : p.samples) {
        const double P = p.P(smp.f);
        smp.df = s * std::sqrt(std::max(P, 0.0));
    }
    if (p.kind == ProfileCase::Compact && p.Fb > 0.0) p.samples.back().df = 0.0;
    return p;
}

MetricSample profile_metric(const KahlerProfile& p, double f) {
    const int s = p.orientation;
    const double P = p.P(f), dP = p.dP(f);
    if (!(P > 0.0)) throw std::domain_error("profile_metric: (f')^2 vanishes at this f");
    const double sq = std::sqrt(P);
    MetricSample m;
    m.t = p.t_of(f);
    m.f = {f * sq, f, f};
    m.df = {s * (P + 0.5 * f * dP), s * sq, s * sq};
    m.u_prime = p.C * f * s * sq;
    return m;
}

PhaseState profile_phase(const KahlerProfile& p, double f) { return to_phase(profile_metric(p, f)); }

double two_ended_constant(int n, double q1, double q2) {
    const double k1 = n / q1, k2 = n / q2;
    if (!(k1 < 2.0)) throw std::invalid_argument("two_ended_constant: needs q1 > n/2");
    const auto roots = h1_nonzero_roots(k1, k2);
    if (!roots.empty()) return -roots.front();
    if (std::abs(h1_third_derivative_at_zero(k1, k2)) < 1e-10) return 0.0;
    throw std::domain_error("two_ended_constant: h1 has no admissible root");
}

double limsol_defect(int n, double q1, double q2, double delta, double C_stop) {
    const double C = two_ended_constant(n, q1, q2);
    const KahlerProfile prof = build_profile(BoltInc{double(n), q1}, C);
    if (prof.kind != ProfileCase::Compact) throw std::domain_error("limsol_defect: profile does not close");
    const double f = prof.f_at(delta);
    PhaseState s = profile_phase(prof, f);
    s.t = delta;
    StopConditions stops;
    stops.xi_floor = C_stop;
    const Trajectory tr = integrate(s, 1.0, System::Su2, stops);
    if (tr.event != Termination::XiThreshold) return kInf;
    double best = kInf;
    const ClosingSpec end = ClosingSpec::bolt(n);
    for (const auto& perm : admissible_permutations(end)) best = std::min(best, sol_value(tr.back(), end, perm));
    return best;
}

const char* kahler_space_name(KahlerSpace s) {
    switch (s) {
        case KahlerSpace::GaussianC2: return "gaussian_C2";
        case KahlerSpace::BlowupCP2TwoCone: return "Bl1CP2_two_cone";
        case KahlerSpace::S2xS2TwoCone: return "S2xS2_two_cone";
        case KahlerSpace::CP2OneCone: return "CP2_one_cone";
        case KahlerSpace::OMinusNOneCone: return "O(-n)_one_cone";
    }
    return "?";
}

KahlerSpace classify_kahler_space(const KahlerBoundary& start, const std::optional<KahlerBoundary>& far,
                                  bool complete, double C) {
    const bool vs = is_vanishing(start);
    if (!far) {
        if (!complete) throw std::invalid_argument("classify_kahler_space: incomplete noncompact metric");
        if (vs) {
            if (std::abs(C - 1.0) > 1e-9) throw std::invalid_argument("classify_kahler_space: complete C^2 needs C = 1");
            return KahlerSpace::GaussianC2;
        }
        if (!std::holds_alternative<BoltInc>(start))
            throw std::invalid_argument("classify_kahler_space: noncompact ends start from an increasing bolt");
        const auto& b = std::get<BoltInc>(start);
        if (!(b.q > 0.5 * b.n)) throw std::invalid_argument("classify_kahler_space: O(-n) needs q > n/2");
        return KahlerSpace::OMinusNOneCone;
    }
    const bool vf = is_vanishing(*far);
    if (vs && vf) throw std::invalid_argument("classify_kahler_space: two fixed points admit no Kahler soliton");
    if (vs || vf) {
        const KahlerBoundary& bolt = vs ? *far : start;
        if (boundary_n(bolt) != 1.0) throw std::invalid_argument("classify_kahler_space: CP2 bolt has n = 1");
        return KahlerSpace::CP2OneCone;
    }
    const double n = boundary_n(start);
    if (boundary_n(*far) != n) throw std::invalid_argument("classify_kahler_space: bolt slopes differ");
    if (std::floor(n) != n || n < 1) throw std::invalid_argument("classify_kahler_space: n must be a positive integer");
    if (!(boundary_q(start) > 0.5 * n) && !(boundary_q(*far) > 0.5 * n))
        throw std::invalid_argument("classify_kahler_space: no soliton with both q <= n/2");
    return static_cast<long>(n) % 2 == 1 ? KahlerSpace::BlowupCP2TwoCone : KahlerSpace::S2xS2TwoCone;
}

KahlerSpace classify_kahler_space(const KahlerProfile& p) {
    return classify_kahler_space(p.start, p.far, p.kind == ProfileCase::Complete, p.C);
}

}  // namespace soliton
