#include "soliton/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace soliton {

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0) || delta > 0.01) throw std::invalid_argument("series: delta must lie in (0, 0.01]");
}

}  // namespace

SolitonParams::SolitonParams(double lam, Boundary b) : lambda(lam), boundary(b) {
    if (!std::isfinite(lambda)) throw std::invalid_argument("SolitonParams: lambda must be finite");
    if (const auto* bolt = std::get_if<Bolt>(&boundary)) {
        if (bolt->n < 1) throw std::invalid_argument("SolitonParams: bolt slope n must be positive");
        if (bolt->gamma != 0.0 && bolt->n != 1 && bolt->n != 2 && bolt->n != 4)
            throw std::invalid_argument("SolitonParams: gamma must vanish unless n is 1, 2 or 4");
    }
}

double alpha_of(const std::array<double, 3>& a, double lambda) { return -lambda - 3.0 * (a[0] + a[1] + a[2]); }

double SolitonParams::alpha() const {
    if (is_bolt()) return bolt().alpha;
    return alpha_of(fixed().a, lambda);
}

std::string describe(const SolitonParams& p) {
    std::ostringstream os;
    os.precision(17);
    os << "lambda=" << p.lambda << ' ';
    if (p.is_bolt()) {
        const auto& b = p.bolt();
        os << "bolt n=" << b.n << " alpha=" << b.alpha << " beta=" << b.beta << " gamma=" << b.gamma;
    } else {
        const auto& a = p.fixed().a;
        os << "fixed a=(" << a[0] << ',' << a[1] << ',' << a[2] << ")";
    }
    return os.str();
}

PhaseState init_fixed(const SolitonParams& p, double d) {
    check_delta(d);
    if (p.is_bolt()) throw std::invalid_argument("init_fixed: params describe a bolt");
    const auto& a = p.fixed().a;
    const double al = p.alpha();
    const double sa = a[0] + a[1] + a[2];
    PhaseState s;
    s.t = d;
    s.v[kXi] = 3.0 / d + (sa + al) * d;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        s.v[kL + i] = 1.0 / d + a[i] * d;
        s.v[kR + i] = 1.0 / d + 0.5 * (a[i] - a[j] - a[k]) * d;
    }
    return s;
}

PhaseState init_bolt(const SolitonParams& p, double d) {
    check_delta(d);
    if (!p.is_bolt()) throw std::invalid_argument("init_bolt: params describe a fixed point");
    const auto& b = p.bolt();
    const double al = b.alpha, be = b.beta, ga = b.gamma, lam = p.lambda;
    const double d3 = d * d * d;
    double xi, L1, L2, L3, R1, R2, R3;
    switch (b.n) {
        case 1: {
            xi = 1 / d + (2 * al + 8 * be - 3 * lam) / 3 * d +
                 (-4 * al * al - 32 * al * be + 3 * al * lam - 226 * be * be + 84 * be * lam - 9 * lam * lam) / 45 * d3;
            L1 = 1 / d - (al + 4 * be) / 3 * d +
                 (14 * al * al + 112 * al * be - 18 * al * lam + 476 * be * be - 144 * be * lam + 9 * lam * lam) / 180 * d3;
            const double c = -8 * al * be + 2 * al * lam - 92 * be * be + 32 * be * lam - 3 * lam * lam;
            L2 = (4 * be - lam) / 2 * d + (48 * ga + c) / 24 * d3;
            L3 = (4 * be - lam) / 2 * d + (-48 * ga + c) / 24 * d3;
            R1 = be * d + (-al * be - 16 * be * be + 3 * be * lam) / 6 * d3;
            const double c2 = -4 * al * al - 32 * al * be + 18 * al * lam - 316 * be * be + 144 * be * lam - 9 * lam * lam;
            R2 = 1 / d + (al + 4 * be) / 6 * d + (720 * ga + c2) / 720 * d3;
            R3 = 1 / d + (al + 4 * be) / 6 * d + (-720 * ga + c2) / 720 * d3;
            break;
        }
        case 2:
            xi = 1 / d + (2 * al + 4 * be - 3 * lam) / 3 * d;
            L1 = 1 / d - (al + 2 * be) / 3 * d;
            L2 = (2 * be + 2 * ga - lam) / 2 * d;
            L3 = (2 * be - 2 * ga - lam) / 2 * d;
            R1 = be * d;
            R2 = 1 / (2 * d) + (al + 2 * be + 6 * ga) / 12 * d;
            R3 = 1 / (2 * d) + (al + 2 * be - 6 * ga) / 12 * d;
            break;
        case 4:
            xi = 1 / d + (4 * al + 4 * be - ga * ga - 6 * lam) / 6 * d;
            L1 = 1 / d - (2 * al + 2 * be + ga * ga) / 6 * d;
            L2 = ga / 2 + (be - lam) / 2 * d;
            L3 = -ga / 2 + (be - lam) / 2 * d;
            R1 = be * d;
            R2 = 1 / (4 * d) + ga / 4 + (2 * al + 2 * be + 7 * ga * ga) / 48 * d;
            R3 = 1 / (4 * d) - ga / 4 + (2 * al + 2 * be + 7 * ga * ga) / 48 * d;
            break;
        default: {
            const double n = b.n;
            xi = 1 / d + (2 * n * al + 8 * be - 3 * n * lam) / (3 * n) * d;
            L1 = 1 / d - (n * al + 4 * be) / (3 * n) * d;
            L2 = L3 = (4 * be - n * lam) / (2 * n) * d;
            R1 = be * d;
            R2 = R3 = 1 / (n * d) + (n * al + 4 * be) / (6 * n * n) * d;
        }
    }
    return make_state(d, xi, {L1, L2, L3}, {R1, R2, R3});
}

PhaseState init_start(const SolitonParams& p, double delta) {
    return p.is_bolt() ? init_bolt(p, delta) : init_fixed(p, delta);
}

int series_order(const Boundary& b) {
    if (const auto* bolt = std::get_if<Bolt>(&b)) return bolt->n == 1 ? 3 : 1;
    return 1;
}

PhaseState enforce_einstein(const PhaseState& s, double lambda) {
    double K = 2.0 * lambda;
    for (int i = 0; i < 3; ++i) {
        const double d = s.R((i + 1) % 3) - s.R((i + 2) % 3);
        K += -2.0 * s.R(i) * s.R(i) + 2.0 * d * d;
    }
    // with xi = sum L the constraint reads 2 e2(L) + K = 0; shift L2, L3 by x
    const double L1 = s.L(0), L2 = s.L(1), L3 = s.L(2);
    const double b = 2.0 * L1 + L2 + L3;
    const double c = L1 * L2 + L1 * L3 + L2 * L3 + 0.5 * K;
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) throw std::domain_error("enforce_einstein: no real correction");
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double x = q != 0.0 ? c / q : 0.0;
    if (!std::isfinite(x)) x = 0.0;
    PhaseState r = s;
    r.v[kL + 1] += x;
    r.v[kL + 2] += x;
    r.v[kXi] = r.L(0) + r.L(1) + r.L(2);
    return r;
}

PhaseState enforce_kahler_bolt(const PhaseState& s, double lambda, int n, double alpha, int eps) {
    const double e = eps >= 0 ? 1.0 : -1.0;
    PhaseState r = s;
    const double R1 = s.R(0), R2 = s.R(1);
    r.v[kL + 1] = r.v[kL + 2] = e * R1;
    // third relation, needed for L2 - eps R1 to stay zero:
    // lambda + 2 eps R1 L1 + 2 R1^2 + eps alpha R1 / (n R2) - 4 R1 R2 = 0
    r.v[kL] = (4.0 * R1 * R2 - lambda - 2.0 * R1 * R1 - e * alpha * R1 / (n * R2)) / (2.0 * e * R1);
    r.v[kXi] = r.L(0) + 2.0 * e * R1 + alpha / (n * R2);
    return r;
}

std::vector<double> desingularization_spectrum(const SingularKind& kind) {
    PhaseVector s0{};
    if (std::holds_alternative<FixedPointKind>(kind)) {
        s0 = {3, 1, 1, 1, 1, 1, 1};
    } else {
        const int n = std::get<BoltKind>(kind).n;
        if (n < 1) throw std::invalid_argument("desingularization_spectrum: n must be positive");
        s0 = {1, 1, 0, 0, 0, 1.0 / n, 1.0 / n};
    }
    const Eigen::Matrix<double, 7, 7> J = jacobian_su2(s0);
    Eigen::EigenSolver<Eigen::Matrix<double, 7, 7>> es(J, false);
    std::vector<double> ev;
    for (int i = 0; i < 7; ++i) ev.push_back(es.eigenvalues()[i].real());
    std::sort(ev.begin(), ev.end());
    return ev;
}

SolitonParams rescale(const SolitonParams& p, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("rescale: c must be positive");
    const double c2 = c * c;
    if (p.is_bolt()) {
        Bolt b = p.bolt();
        b.alpha *= c2;
        b.beta *= c2;
        b.gamma *= std::pow(c, 4.0 / b.n);
        return SolitonParams(c2 * p.lambda, b);
    }
    FixedPoint f = p.fixed();
    for (auto& a : f.a) a *= c2;
    return SolitonParams(c2 * p.lambda, f);
}

}  // namespace soliton
