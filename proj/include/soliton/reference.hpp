#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "soliton/phase.hpp"
#include "soliton/series.hpp"
#include "soliton/shooter.hpp"

namespace soliton {

// Phase state together with its exact t-derivative.
struct PhaseJet {
    PhaseState state;
    PhaseVector derivative{};
    MetricSample metric;
};

struct NamedSolution {
    std::string name;
    double lambda = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;  // inf for noncompact entries
    System system = System::Su2;
    SolitonParams start;
    std::optional<SolitonParams> far;       // compact entries only
    std::optional<ClosingSpec> closing;
    std::function<PhaseJet(double)> jet;

    bool compact() const { return far.has_value(); }
};

const std::vector<NamedSolution>& catalog();
std::vector<std::string> catalog_names();
// Throws std::out_of_range for unknown names.
const NamedSolution& lookup(const std::string& name);

struct Evaluation {
    MetricSample metric;
    PhaseState phase;
};
// Throws std::out_of_range for t outside the open interval.
Evaluation evaluate(const std::string& name, double t);

// Max over 100 interior points and all components of
// |d/dt phase - rhs| / (1 + |rhs|), rhs being the entry's governing system.
double residual(const NamedSolution& s, int points = 100);

}  // namespace soliton
