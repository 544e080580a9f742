#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace soliton {

// Least-squares polynomial through (x, y) in the shifted variable x - x0.
// Returns coefficients c[m] of (x - x0)^m.
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree, double x0);

double polyval(const std::vector<double>& c, double dx);

// Sign scan on [lo, hi] at the given step, each bracket refined with TOMS 748.
std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, double step,
                               double xtol = 1e-12);

// Root inside a bracket with f(lo), f(hi) of opposite sign.
double bracket_root(const std::function<double(double)>& f, double lo, double hi, double xtol = 1e-12);

}  // namespace soliton
