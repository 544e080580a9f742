#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "soliton/phase.hpp"
#include "soliton/series.hpp"

namespace soliton {

struct StopConditions {
    double t_max = 50.0;
    double xi_floor = -20.0;
    double norm_ceiling = 1e8;
    double collapse_floor = 1e-10;
    double critical_radius = 1e-8;
    double kahler_radius = 0.0;  // 0 disables the Kahler-point event
};

enum class Termination { Horizon, XiThreshold, BlowUp, Collapse, EinsteinPoint, KahlerPoint };

const char* termination_name(Termination e);

struct Trajectory {
    System system = System::Su2;
    double lambda = 0.0;
    std::vector<PhaseState> samples;
    std::vector<PhaseVector> slopes;
    Termination event = Termination::Horizon;

    const PhaseState& front() const { return samples.front(); }
    const PhaseState& back() const { return samples.back(); }
    double t_end() const { return samples.back().t; }
    // Cubic Hermite interpolation between stored steps.
    PhaseState at(double t) const;
};

struct NoCrossing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultTol = 1e-10;

// Dormand-Prince 5(4) with dense output; events are located by bisection to 1e-9 in t.
Trajectory integrate(const PhaseState& start, double lambda, System system, const StopConditions& stops,
                     double tol = kDefaultTol);

// Time at which xi first reaches C, from the series start at delta.
double find_T(const SolitonParams& params, double C, double delta = kDefaultDelta, double tol = kDefaultTol,
              double t_max = 50.0);

// Metric functions along a trajectory; degenerate (beta = 0) trajectories
// rebuild f1 by quadrature of L1 with f1(t0) = t0 and report f2 = f3 = inf.
std::vector<MetricSample> reconstruct_metric(const Trajectory& traj, bool degenerate);
std::vector<MetricSample> reconstruct_metric(const Trajectory& traj, const SolitonParams& params);

}  // namespace soliton
