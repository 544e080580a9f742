#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "soliton/phase.hpp"

namespace soliton {

struct FixedPoint {
    std::array<double, 3> a{};
};

struct Bolt {
    int n = 1;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

using Boundary = std::variant<FixedPoint, Bolt>;

struct SolitonParams {
    double lambda = -1.0;
    Boundary boundary;

    // Throws std::invalid_argument on n < 1 or gamma != 0 with n outside {1,2,4}.
    SolitonParams(double lambda, Boundary b);

    bool is_bolt() const { return std::holds_alternative<Bolt>(boundary); }
    const Bolt& bolt() const { return std::get<Bolt>(boundary); }
    const FixedPoint& fixed() const { return std::get<FixedPoint>(boundary); }
    // alpha = -u''(0); for fixed points alpha = -lambda - 3 (a1 + a2 + a3).
    double alpha() const;
    // beta == 0 bolts start the reduced system.
    bool degenerate() const { return is_bolt() && bolt().beta == 0.0; }
};

std::string describe(const SolitonParams& p);

inline constexpr double kDefaultDelta = 1e-3;

double alpha_of(const std::array<double, 3>& a, double lambda);

PhaseState init_fixed(const SolitonParams& p, double delta = kDefaultDelta);
PhaseState init_bolt(const SolitonParams& p, double delta = kDefaultDelta);
PhaseState init_start(const SolitonParams& p, double delta = kDefaultDelta);

// Series order used for a boundary: 3 for n = 1 bolts, 1 otherwise.
int series_order(const Boundary& b);

// Moves L2, L3 by a common shift and sets xi = L1 + L2 + L3 so that both
// Einstein constraints hold at s. Used for alpha = 0 starts.
PhaseState enforce_einstein(const PhaseState& s, double lambda);

// Bolt analogue on the Kahler locus gamma = 0, (4 - 2 eps n) beta = n lambda:
// sets L2 = L3 = eps R1, solves the companion relation
// lambda + 2 eps R1 L1 + 2 R1^2 - 4 R1 R2 + eps alpha R1 / (n R2) = 0 for L1,
// then xi = L1 + 2 eps R1 + alpha / (n R2).
PhaseState enforce_kahler_bolt(const PhaseState& s, double lambda, int n, double alpha, int eps = 1);

struct FixedPointKind {};
struct BoltKind {
    int n = 1;
};
using SingularKind = std::variant<FixedPointKind, BoltKind>;

// Eigenvalues of the t^{-1} part of the system at the singular orbit, i.e. of
// the Jacobian at the leading-order state, sorted ascending.
std::vector<double> desingularization_spectrum(const SingularKind& kind);

// Parameters of the c-rescaled soliton, which lives at c^2 lambda.
SolitonParams rescale(const SolitonParams& p, double c);

}  // namespace soliton
