#include "soliton/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

namespace soliton {

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree, double x0) {
    if (x.size() != y.size() || x.size() < static_cast<std::size_t>(degree + 1))
        throw std::invalid_argument("polyfit: not enough points");
    double scale = 0.0;
    for (double xi : x) scale = std::max(scale, std::abs(xi - x0));
    if (scale == 0.0) scale = 1.0;
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd V(n, degree + 1);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        const double u = (x[i] - x0) / scale;
        double p = 1.0;
        for (int m = 0; m <= degree; ++m) {
            V(i, m) = p;
            p *= u;
        }
        b(i) = y[i];
    }
    const Eigen::VectorXd c = V.colPivHouseholderQr().solve(b);
    std::vector<double> out(degree + 1);
    double s = 1.0;
    for (int m = 0; m <= degree; ++m) {
        out[m] = c(m) / s;
        s *= scale;
    }
    return out;
}

double polyval(const std::vector<double>& c, double dx) {
    double r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * dx + *it;
    return r;
}

double bracket_root(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw std::domain_error("bracket_root: no sign change");
    std::uintmax_t iters = 200;
    auto tol = [xtol](double a, double b) { return std::abs(b - a) <= xtol; };
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, double step,
                               double xtol) {
    std::vector<double> roots;
    const long n = static_cast<long>(std::ceil((hi - lo) / step));
    double a = lo, fa = f(a);
    for (long i = 1; i <= n; ++i) {
        const double b = std::min(hi, lo + i * step);
        const double fb = f(b);
        if (fa == 0.0) {
            roots.push_back(a);
        } else if (fb != 0.0 && (fa > 0.0) != (fb > 0.0)) {
            roots.push_back(bracket_root(f, a, b, xtol));
        }
        a = b;
        fa = fb;
    }
    if (fa == 0.0) roots.push_back(a);
    return roots;
}

}  // namespace soliton
