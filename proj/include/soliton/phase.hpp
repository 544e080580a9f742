#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>

#include <Eigen/Dense>

namespace soliton {

// (xi, L1, L2, L3, R1, R2, R3)
using PhaseVector = std::array<double, 7>;

inline constexpr int kXi = 0;
inline constexpr int kL = 1;
inline constexpr int kR = 4;

struct PhaseState {
    double t = 0.0;
    PhaseVector v{};

    double xi() const { return v[kXi]; }
    double L(int i) const { return v[kL + i]; }
    double R(int i) const { return v[kR + i]; }
};

PhaseState make_state(double t, double xi, std::array<double, 3> L, std::array<double, 3> R);

struct MetricSample {
    double t = 0.0;
    std::array<double, 3> f{};
    std::array<double, 3> df{};
    double u_prime = 0.0;
};

enum class System {
    Su2,
    U2,
    So4,
    ReducedBeta0,  // xi, L1, L2 evolve; R1 = 0; R2 = R3 carried along via R' = -R L1
    Einstein,      // xi slaved to L1 + L2 + L3
    Slow,          // slot 0 holds 1/xi, time is s with dt/ds = 1/xi
};

const char* system_name(System s);

struct SymmetryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

PhaseVector rhs_su2(const PhaseVector& y, double lambda);
PhaseVector rhs_u2(const PhaseVector& y, double lambda);
PhaseVector rhs_so4(const PhaseVector& y, double lambda);
PhaseVector rhs_reduced_beta0(const PhaseVector& y, double lambda);
PhaseVector rhs_einstein(const PhaseVector& y, double lambda);
PhaseVector rhs_slow(const PhaseVector& w, double lambda = -1.0);
PhaseVector rhs(System sys, const PhaseVector& y, double lambda);

inline PhaseVector rhs_su2(const PhaseState& s, double lambda) { return rhs_su2(s.v, lambda); }

// d rhs_su2 / dy
Eigen::Matrix<double, 7, 7> jacobian_su2(const PhaseVector& y);

// Linearization of the xi-slaved system in (L1, L2, L3, R1, R2, R3) at the
// Einstein point L = sqrt(-lambda/3), R = 0.
Eigen::Matrix<double, 6, 6> einstein_linearization(double lambda = -1.0);

// Einstein point and the U(2) Kahler critical point with special index k.
PhaseVector einstein_point(double lambda = -1.0);
PhaseVector kahler_point(int k, double lambda = -1.0);

// Phase state from metric data at t.
PhaseState to_phase(const MetricSample& m);
// Algebraic inversion f_i^2 = 1/(R_j R_k), f_i' = L_i f_i, u' = sum L - xi.
MetricSample to_metric(const PhaseState& s);

double einstein_defect(const PhaseState& s);
// Second Einstein constraint; vanishes with einstein_defect on Einstein trajectories.
double einstein_constraint(const PhaseState& s, double lambda);

struct KahlerFixed {
    int k = 0;  // special index (a_k = 4 a_i)
    int i = 1;
    double alpha = 0.0;
};
struct KahlerBolt {
    int eps = 1;
    int n = 1;
    double alpha = 0.0;
};
struct KahlerEinsteinN2 {
    int eps = 1;
};
using KahlerVariant = std::variant<KahlerFixed, KahlerBolt, KahlerEinsteinN2>;

inline constexpr double kDivisionGuard = 1e-13;

// Pair of defects; empty when a denominator is below the division guard.
std::optional<std::pair<double, double>> kahler_defects(const PhaseState& s, double lambda,
                                                         const KahlerVariant& variant);

// lambda + R_k (xi + L_k - 4 R_i), conserved on the fixed-point Kahler locus.
double kahler_z(const PhaseState& s, double lambda, int k, int i);

// (xi, L, R)(t) -> (c xi(ct), c L(ct), c R(ct)); solves the system with c^2 lambda.
PhaseState rescale_state(const PhaseState& s, double c);

}  // namespace soliton
