#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "soliton/phase.hpp"

namespace soliton {

// Kahler U(2) profiles at lambda = 1: f2 = f3 = f, f1 = |f f'|, u' = C f f'.

struct Vanishing {};           // f(0) = 0, f'(0) = 1
struct BoltInc {               // f(0)^2 = 4 - 2n/q, f'(0) = 0
    double n = 1.0;
    double q = 1.0;
};
struct BoltDec {               // f(0)^2 = 4 + 2n/q, f'(0) = 0
    double n = 1.0;
    double q = 1.0;
};
using KahlerBoundary = std::variant<Vanishing, BoltInc, BoltDec>;

std::string describe(const KahlerBoundary& b);
// f(0)^2 at the boundary; throws for BoltInc with q <= n/2.
double anchor_square(const KahlerBoundary& b);
bool is_orbifold(const KahlerBoundary& b);

// (f')^2 from the first integral: C = 0 gives 1 - f^2/6 + D0 f^-4, otherwise
// f^-4 ([C^2 F (F - 4) + 4C (F - 2) + 8] / C^3 + D e^{CF/2}) with F = f^2.
double kahler_first_integral(double f, double C, double D);

// Integration constant that makes f^4 (f')^2 vanish at the boundary.
double boundary_constant(const KahlerBoundary& b, double C);

double h1(double x, double k1, double k2);
double h1_third_derivative_at_zero(double k1, double k2);
// Nonzero roots on [-20, 20] (sign scan at step 1e-3, refined to 1e-12).
std::vector<double> h1_nonzero_roots(double k1, double k2);

double h2(double alpha, double L);
std::vector<double> h2_nonzero_roots(double L);

// k2 making the two-ended profile Einstein.
double einstein_partner(double k1);

int count_solitons(int n, double q1, double q2);
// Same count from the root structure of h1.
int count_solitons_numeric(int n, double q1, double q2);

struct ConeConstant {
    double C = 0.0;
    bool degenerate = false;  // k near 0, where C diverges
};
// C making the noncompact profile from BoltInc{n, q} complete.
ConeConstant complete_cone_constant(double n, double q);

enum class ProfileCase { Compact, Complete, Incomplete, Singular };
const char* profile_case_name(ProfileCase c);

struct KahlerSample {
    double t = 0.0;
    double f = 0.0;
    double df = 0.0;
};

struct KahlerProfile {
    KahlerBoundary start;
    double C = 0.0;
    double D = 0.0;        // D or D0 depending on C
    int orientation = 1;   // +1 when f increases away from the start
    ProfileCase kind = ProfileCase::Compact;
    std::optional<KahlerBoundary> far;
    double f_start = 0.0;
    double f_end = 0.0;    // far value of f (inf for noncompact ends)
    double T = 0.0;        // length of the interval (inf when complete)
    std::vector<KahlerSample> samples;

    // (f')^2 and d(f')^2/df at f, evaluated stably near the anchors.
    double P(double f) const;
    double dP(double f) const;
    // Arclength from the start to f.
    double t_of(double f) const;
    double f_at(double t) const;

    // internal
    double Fa = 0.0;
    double Fb = 0.0;
};

KahlerProfile build_profile(const KahlerBoundary& start, double C, int samples = 401);

// Phase variables of the profile at the point where the profile takes value f.
PhaseState profile_phase(const KahlerProfile& p, double f);
MetricSample profile_metric(const KahlerProfile& p, double f);

// C of the two-ended Kahler profile from BoltInc{n, q1} to BoltDec{n, q2}.
double two_ended_constant(int n, double q1, double q2);

// Builds the profile with the Kahler constant, converts to phase data at t = delta,
// integrates the full system to xi = C_stop and returns the smooth-closing SOL.
double limsol_defect(int n, double q1, double q2, double delta = 1e-3, double C_stop = -20.0);

enum class KahlerSpace { GaussianC2, BlowupCP2TwoCone, S2xS2TwoCone, CP2OneCone, OMinusNOneCone };
const char* kahler_space_name(KahlerSpace s);

KahlerSpace classify_kahler_space(const KahlerBoundary& start, const std::optional<KahlerBoundary>& far,
                                  bool complete, double C);
KahlerSpace classify_kahler_space(const KahlerProfile& p);

}  // namespace soliton
