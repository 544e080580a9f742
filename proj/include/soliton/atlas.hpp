#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "soliton/flow.hpp"
#include "soliton/series.hpp"

namespace soliton {

enum class AsymptoticClass { EinsteinAttractor, AsymptoticallyConical, KahlerCritical, DivergentOrIncomplete, Undecided };

// EINSTEIN, CONICAL, KAHLER, DIVERGENT, UNDECIDED
std::string_view class_name(AsymptoticClass c);

struct ClassifyOptions {
    double delta = kDefaultDelta;
    double horizon = 50.0;
    double tol_cone = 1e-2;
    double critical_radius = 1e-3;
    double kahler_radius = 1e-3;
    double r_bound = 1e3;  // bound on R_i * r at the horizon
    double tol = kDefaultTol;
    bool retry = true;  // rerun undecided cells once with doubled horizon
};

struct Classification {
    AsymptoticClass cls = AsymptoticClass::Undecided;
    double horizon_t = 0.0;  // last time reached
    // alpha = 0: largest Einstein-constraint violation along the flow;
    // otherwise the conical residual at the horizon (NaN if never reached).
    double defect = 0.0;
    Termination event = Termination::Horizon;
};

// Conical test on a state at the horizon, in lambda-normalized units, using the
// cone radius r = xi - sum L = -u'.
bool conical_at(const PhaseState& s, double lambda, const ClassifyOptions& opt, double* residual = nullptr);

bool is_einstein_params(const SolitonParams& p);

Classification classify(const SolitonParams& params, const ClassifyOptions& opt = {});

struct Axis {
    std::string name;  // alpha, d12, d23 for fixed points; alpha, beta, gamma for bolts
    double lo = 0.0;
    double hi = 1.0;
    int count = 2;
    double value(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
};

// Parameters with one coordinate replaced. Fixed points are coordinatized by
// (alpha, d12 = a1 - a2, d23 = a2 - a3) at the base lambda.
SolitonParams with_coordinate(const SolitonParams& base, const std::string& name, double value);
double coordinate(const SolitonParams& p, const std::string& name);

struct ScanRegion {
    SolitonParams base;
    Axis x;
    Axis y;
};

// Throws std::invalid_argument for unknown axes, resolution < 2 or points
// outside the closed admissible cone.
void validate(const ScanRegion& r);

struct ScanCell {
    double x = 0.0;
    double y = 0.0;
    Classification c;
};

// Row-major: x index outer, y index inner.
std::vector<ScanCell> scan(const ScanRegion& region, const ClassifyOptions& opt = {}, unsigned threads = 1);

void write_scan_csv(std::ostream& os, const ScanRegion& region, const std::vector<ScanCell>& cells);

struct BoundaryPoint {
    double alpha = 0.0;
    double beta_max = 0.0;
    bool ok = false;  // false when no bracket was found
};

// Largest beta (gamma = 0) whose trajectory does not diverge, bisected to beta_tol.
std::vector<BoundaryPoint> boundary_trace(int n, const std::vector<double>& alphas, const ClassifyOptions& opt = {},
                                          double beta_tol = 1e-3, double lambda = -1.0, unsigned threads = 1);

// Einstein constant of the U(2) Einstein metrics on O(-n) at lambda = -1.
double u2_einstein_constant(int n, double beta);

// Runs f(i) for i in [0, count) over up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& f);

unsigned threads_from_env(unsigned fallback = 1);

}  // namespace soliton
