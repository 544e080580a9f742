#include "soliton/phase.hpp"

#include <cmath>

namespace soliton {

namespace {

constexpr int jdx(int i) { return (i + 1) % 3; }
constexpr int kdx(int i) { return (i + 2) % 3; }

void check_symmetric(const PhaseVector& y, const char* who) {
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a) + std::abs(b)); };
    if (!close(y[kL + 1], y[kL + 2]) || !close(y[kR + 1], y[kR + 2]))
        throw SymmetryError(std::string(who) + ": state is off the L2 = L3, R2 = R3 locus");
}

}  // namespace

PhaseState make_state(double t, double xi, std::array<double, 3> L, std::array<double, 3> R) {
    return PhaseState{t, {xi, L[0], L[1], L[2], R[0], R[1], R[2]}};
}

const char* system_name(System s) {
    switch (s) {
        case System::Su2: return "su2";
        case System::U2: return "u2";
        case System::So4: return "so4";
        case System::ReducedBeta0: return "beta0";
        case System::Einstein: return "einstein";
        case System::Slow: return "slow";
    }
    return "?";
}

PhaseVector rhs_su2(const PhaseVector& y, double lambda) {
    PhaseVector d{};
    const double xi = y[kXi];
    d[kXi] = -(y[1] * y[1] + y[2] * y[2] + y[3] * y[3]) - lambda;
    for (int i = 0; i < 3; ++i) {
        const int j = jdx(i), k = kdx(i);
        const double Li = y[kL + i], Lj = y[kL + j], Lk = y[kL + k];
        const double Ri = y[kR + i], Rj = y[kR + j], Rk = y[kR + k];
        d[kL + i] = -xi * Li + 2.0 * Ri * Ri - 2.0 * (Rj - Rk) * (Rj - Rk) - lambda;
        d[kR + i] = Ri * (Li - Lj - Lk);
    }
    return d;
}

PhaseVector rhs_u2(const PhaseVector& y, double lambda) {
    check_symmetric(y, "rhs_u2");
    const double xi = y[kXi], L1 = y[1], L2 = y[2], R1 = y[4], R2 = y[5];
    PhaseVector d{};
    d[kXi] = -L1 * L1 - 2.0 * L2 * L2 - lambda;
    d[1] = -xi * L1 + 2.0 * R1 * R1 - lambda;
    d[2] = -xi * L2 + 4.0 * R1 * R2 - 2.0 * R1 * R1 - lambda;
    d[3] = d[2];
    d[4] = R1 * (L1 - 2.0 * L2);
    d[5] = -R2 * L1;
    d[6] = d[5];
    return d;
}

PhaseVector rhs_so4(const PhaseVector& y, double lambda) {
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a) + std::abs(b)); };
    if (!close(y[1], y[2]) || !close(y[1], y[3]) || !close(y[4], y[5]) || !close(y[4], y[6]))
        throw SymmetryError("rhs_so4: state is off the L1 = L2 = L3, R1 = R2 = R3 locus");
    const double xi = y[kXi], L = y[1], R = y[4];
    PhaseVector d{};
    d[kXi] = -3.0 * L * L - lambda;
    const double dL = -xi * L + 2.0 * R * R - lambda;
    const double dR = -R * L;
    for (int i = 0; i < 3; ++i) {
        d[kL + i] = dL;
        d[kR + i] = dR;
    }
    return d;
}

PhaseVector rhs_reduced_beta0(const PhaseVector& y, double lambda) {
    const double xi = y[kXi], L1 = y[1], L2 = y[2];
    PhaseVector d{};
    d[kXi] = -L1 * L1 - 2.0 * L2 * L2 - lambda;
    d[1] = -xi * L1 - lambda;
    d[2] = -xi * L2 - lambda;
    d[3] = d[2];
    d[4] = 0.0;
    d[5] = -y[5] * L1;
    d[6] = -y[6] * L1;
    return d;
}

PhaseVector rhs_einstein(const PhaseVector& y, double lambda) {
    PhaseVector z = y;
    z[kXi] = y[1] + y[2] + y[3];
    PhaseVector d = rhs_su2(z, lambda);
    d[kXi] = d[1] + d[2] + d[3];
    return d;
}

PhaseVector rhs_slow(const PhaseVector& w, double lambda) {
    const double ell = w[kXi];
    PhaseVector d{};
    const double sumsq = w[1] * w[1] + w[2] * w[2] + w[3] * w[3];
    d[kXi] = ell * ell * ell * (sumsq + lambda);
    for (int i = 0; i < 3; ++i) {
        const int j = jdx(i), k = kdx(i);
        const double Li = w[kL + i], Lj = w[kL + j], Lk = w[kL + k];
        const double Ri = w[kR + i], Rj = w[kR + j], Rk = w[kR + k];
        d[kL + i] = -Li + ell * (2.0 * Ri * Ri - 2.0 * (Rj - Rk) * (Rj - Rk) - lambda);
        d[kR + i] = ell * Ri * (Li - Lj - Lk);
    }
    return d;
}

PhaseVector rhs(System sys, const PhaseVector& y, double lambda) {
    switch (sys) {
        case System::Su2: return rhs_su2(y, lambda);
        case System::U2: return rhs_u2(y, lambda);
        case System::So4: return rhs_so4(y, lambda);
        case System::ReducedBeta0: return rhs_reduced_beta0(y, lambda);
        case System::Einstein: return rhs_einstein(y, lambda);
        case System::Slow: return rhs_slow(y, lambda);
    }
    throw std::invalid_argument("unknown system");
}

Eigen::Matrix<double, 7, 7> jacobian_su2(const PhaseVector& y) {
    Eigen::Matrix<double, 7, 7> J = Eigen::Matrix<double, 7, 7>::Zero();
    const double xi = y[kXi];
    for (int i = 0; i < 3; ++i) J(kXi, kL + i) = -2.0 * y[kL + i];
    for (int i = 0; i < 3; ++i) {
        const int j = jdx(i), k = kdx(i);
        const double Ri = y[kR + i], Rj = y[kR + j], Rk = y[kR + k];
        J(kL + i, kXi) = -y[kL + i];
        J(kL + i, kL + i) = -xi;
        J(kL + i, kR + i) = 4.0 * Ri;
        J(kL + i, kR + j) = -4.0 * (Rj - Rk);
        J(kL + i, kR + k) = 4.0 * (Rj - Rk);
        J(kR + i, kR + i) = y[kL + i] - y[kL + j] - y[kL + k];
        J(kR + i, kL + i) = Ri;
        J(kR + i, kL + j) = -Ri;
        J(kR + i, kL + k) = -Ri;
    }
    return J;
}

PhaseVector einstein_point(double lambda) {
    if (!(lambda < 0.0)) throw std::invalid_argument("einstein_point: needs lambda < 0");
    const double l = std::sqrt(-lambda / 3.0);
    return {3.0 * l, l, l, l, 0.0, 0.0, 0.0};
}

PhaseVector kahler_point(int k, double lambda) {
    if (!(lambda < 0.0)) throw std::invalid_argument("kahler_point: needs lambda < 0");
    if (k < 0 || k > 2) throw std::invalid_argument("kahler_point: index out of range");
    const double c = std::sqrt(-lambda / 6.0);
    PhaseVector p{4.0 * c, c, c, c, 0.0, 0.0, 0.0};
    p[kL + k] = 2.0 * c;
    p[kR + k] = c;
    return p;
}

Eigen::Matrix<double, 6, 6> einstein_linearization(double lambda) {
    const auto J = jacobian_su2(einstein_point(lambda));
    Eigen::Matrix<double, 6, 6> A;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) A(a, b) = J(a + 1, b + 1) + (b < 3 ? J(a + 1, kXi) : 0.0);
    return A;
}

PhaseState to_phase(const MetricSample& m) {
    PhaseState s;
    s.t = m.t;
    double sumL = 0.0;
    for (int i = 0; i < 3; ++i) {
        s.v[kL + i] = m.df[i] / m.f[i];
        s.v[kR + i] = m.f[i] / (m.f[jdx(i)] * m.f[kdx(i)]);
        sumL += s.v[kL + i];
    }
    s.v[kXi] = sumL - m.u_prime;
    return s;
}

MetricSample to_metric(const PhaseState& s) {
    MetricSample m;
    m.t = s.t;
    for (int i = 0; i < 3; ++i) {
        const double p = s.R(jdx(i)) * s.R(kdx(i));
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::domain_error("to_metric: non-positive R product, metric not recoverable");
        m.f[i] = 1.0 / std::sqrt(p);
        m.df[i] = s.L(i) * m.f[i];
    }
    m.u_prime = s.L(0) + s.L(1) + s.L(2) - s.xi();
    return m;
}

double einstein_defect(const PhaseState& s) { return s.xi() - s.L(0) - s.L(1) - s.L(2); }

double einstein_constraint(const PhaseState& s, double lambda) {
    double sumL = 0.0, sumL2 = 0.0, sumR2 = 0.0, cross = 0.0;
    for (int i = 0; i < 3; ++i) {
        sumL += s.L(i);
        sumL2 += s.L(i) * s.L(i);
        sumR2 += s.R(i) * s.R(i);
        const double d = s.R(jdx(i)) - s.R(kdx(i));
        cross += d * d;
    }
    return s.xi() * sumL - sumL2 - 2.0 * sumR2 + 2.0 * cross + 2.0 * lambda;
}

std::optional<std::pair<double, double>> kahler_defects(const PhaseState& s, double lambda,
                                                         const KahlerVariant& variant) {
    if (const auto* f = std::get_if<KahlerFixed>(&variant)) {
        const int k = f->k, i = f->i;
        if (k < 0 || k > 2 || i < 0 || i > 2 || i == k)
            throw std::invalid_argument("kahler_defects: need distinct indices in 0..2");
        if (std::abs(s.R(i)) < kDivisionGuard) return std::nullopt;
        return std::pair{s.R(k) - s.L(i), s.xi() - s.L(k) - 2.0 * s.R(k) - f->alpha / s.R(i)};
    }
    if (const auto* b = std::get_if<KahlerBolt>(&variant)) {
        const double e = b->eps >= 0 ? 1.0 : -1.0;
        const double den = b->n * s.R(1);
        if (std::abs(den) < kDivisionGuard) return std::nullopt;
        return std::pair{s.L(1) - e * s.R(0), s.xi() - s.L(0) - 2.0 * e * s.R(0) - b->alpha / den};
    }
    const auto& ke = std::get<KahlerEinsteinN2>(variant);
    const int a = ke.eps >= 0 ? 1 : 2;  // the f2 role
    const int c = 3 - a;                // the f3 role
    const double zbar = 2.0 * lambda + 4.0 * s.R(c) * (s.L(c) - s.R(0) - s.R(a) + s.R(c));
    const double ybar = 2.0 * s.R(0) - 2.0 * s.R(a) + s.L(0) - s.L(a);
    return std::pair{zbar, ybar};
}

double kahler_z(const PhaseState& s, double lambda, int k, int i) {
    return lambda + s.R(k) * (s.xi() + s.L(k) - 4.0 * s.R(i));
}

PhaseState rescale_state(const PhaseState& s, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("rescale_state: c must be positive");
    PhaseState r;
    r.t = s.t / c;
    for (int m = 0; m < 7; ++m) r.v[m] = c * s.v[m];
    return r;
}

}  // namespace soliton
