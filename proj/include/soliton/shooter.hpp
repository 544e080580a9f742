#pragma once

#include <array>
#include <limits>
#include <ostream>
#include <optional>
#include <vector>

#include "soliton/atlas.hpp"
#include "soliton/flow.hpp"
#include "soliton/series.hpp"

namespace soliton {

struct ClosingSpec {
    enum class Kind { FixedPointEnd, BoltEnd, BoltEnd4 };
    Kind kind = Kind::FixedPointEnd;
    int n = 0;
    bool permute = true;

    static ClosingSpec fixed_point(bool permute = true);
    // n = 4 gives BoltEnd4; permute is forced on for n in {1, 2}.
    static ClosingSpec bolt(int n, bool permute = true);
};

using Permutation = std::array<int, 3>;

// Permutations tried for a closing spec: all six for fixed points and n in
// {1, 2}, identity and the (1,3) swap otherwise, identity alone without permute.
std::vector<Permutation> admissible_permutations(const ClosingSpec& end);

struct SolOptions {
    double delta = kDefaultDelta;
    double C = -20.0;
    double tol = kDefaultTol;
    double t_max = 50.0;
};

// SOL of a single phase state at the crossing time, with the roles of f
// permuted by p.
double sol_value(const PhaseState& s, const ClosingSpec& end, const Permutation& p);

struct SolResult {
    double value = std::numeric_limits<double>::infinity();  // +inf when xi never reaches C
    bool closed = false;
    double t0 = 0.0;  // crossing time of xi = C
    double T = 0.0;   // extrapolated end of the interval
    Permutation perm{0, 1, 2};
    Trajectory trajectory;
};

SolResult sol(const SolitonParams& params, const ClosingSpec& end, const SolOptions& opt = {});

// End of the interval from the zero of 1/xi, by polynomial extrapolation.
double extrapolate_T(const Trajectory& tr);

// Parameters of the reversed solution at the far end (t -> T - t), in the role
// order given by the permutation.
SolitonParams far_end_parameters(const Trajectory& tr, double T, const ClosingSpec& end, const Permutation& p);

struct HeatCell {
    double x = 0.0;
    double y = 0.0;
    double sol = 0.0;
};

// Row-major grid of sol values; axis counts may be 1 for line slices.
std::vector<HeatCell> sol_heatmap(const ScanRegion& region, const ClosingSpec& end, const SolOptions& opt = {},
                                  unsigned threads = 1);
void write_heatmap_csv(std::ostream& os, const ScanRegion& region, const std::vector<HeatCell>& cells);

struct Candidate {
    SolitonParams start;
    double sol = std::numeric_limits<double>::infinity();
    std::optional<SolitonParams> end;
    double T = 0.0;
    int evaluations = 0;
};

// Nelder-Mead on sol within a Euclidean ball of the given radius around the seed.
Candidate refine_candidate(const SolitonParams& seed, const ClosingSpec& end, double radius,
                           const SolOptions& opt = {}, int max_iter = 200);

}  // namespace soliton
