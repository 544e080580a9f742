#include "soliton/shooter.hpp"

#include <algorithm>
#include <cmath>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "soliton/io.hpp"
#include "soliton/numerics.hpp"

namespace soliton {

ClosingSpec ClosingSpec::fixed_point(bool permute) { return {Kind::FixedPointEnd, 0, permute}; }

ClosingSpec ClosingSpec::bolt(int n, bool permute) {
    if (n < 1) throw std::invalid_argument("ClosingSpec: n must be positive");
    return {n == 4 ? Kind::BoltEnd4 : Kind::BoltEnd, n, permute || n == 1 || n == 2};
}

std::vector<Permutation> admissible_permutations(const ClosingSpec& end) {
    if (!end.permute) return {{0, 1, 2}};
    if (end.kind == ClosingSpec::Kind::FixedPointEnd || end.n == 1 || end.n == 2)
        return {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    return {{0, 1, 2}, {2, 1, 0}};
}

double sol_value(const PhaseState& s, const ClosingSpec& end, const Permutation& p) {
    const MetricSample m = to_metric(s);
    const double up = m.u_prime;
    double v = up * up;
    if (end.kind == ClosingSpec::Kind::FixedPointEnd) {
        for (int i = 0; i < 3; ++i) v += m.f[i] * m.f[i] + (m.df[i] + 1.0) * (m.df[i] + 1.0);
        return v;
    }
    const double f1 = m.f[p[0]], f2 = m.f[p[1]], f3 = m.f[p[2]];
    const double d1 = m.df[p[0]], d2 = m.df[p[1]], d3 = m.df[p[2]];
    v += f1 * f1 + (d1 + end.n) * (d1 + end.n) + (f2 - f3) * (f2 - f3);
    if (end.kind == ClosingSpec::Kind::BoltEnd4)
        v += (d2 + d3) * (d2 + d3);
    else
        v += d2 * d2 + d3 * d3;
    return v;
}

namespace {

// Chebyshev-spaced times in [a, b].
std::vector<double> window_times(double a, double b, int n) {
    std::vector<double> t(n);
    for (int k = 0; k < n; ++k) t[k] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(M_PI * (k + 0.5) / n);
    std::sort(t.begin(), t.end());
    return t;
}

double window_start(const Trajectory& tr) {
    const double target = tr.back().xi() / 4.0;
    double ta = tr.front().t;
    for (const auto& s : tr.samples)
        if (s.xi() <= target) {
            ta = s.t;
            break;
        }
    return std::max(ta, tr.front().t);
}

constexpr int kWindowPoints = 24;
constexpr int kWindowDegree = 6;

}  // namespace

double extrapolate_T(const Trajectory& tr) {
    const double t0 = tr.t_end();
    const double ta = window_start(tr);
    if (!(ta < t0)) return t0;
    const auto ts = window_times(ta, t0, kWindowPoints);
    std::vector<double> w;
    for (double t : ts) w.push_back(1.0 / tr.at(t).xi());
    const auto c = polyfit(ts, w, kWindowDegree, t0);
    // Newton from the linear estimate
    double x = -c[0] / c[1];
    for (int it = 0; it < 50; ++it) {
        double v = 0.0, dv = 0.0;
        for (int m = static_cast<int>(c.size()) - 1; m >= 0; --m) {
            dv = dv * x + v;
            v = v * x + c[m];
        }
        const double step = v / dv;
        x -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return t0 + x;
}

SolitonParams far_end_parameters(const Trajectory& tr, double T, const ClosingSpec& end, const Permutation& p) {
    const double t0 = tr.t_end();
    const double ta = window_start(tr);
    const auto ts = window_times(ta, t0, kWindowPoints);
    std::array<std::vector<double>, 3> f, df;
    std::vector<double> up;
    for (double t : ts) {
        const MetricSample m = to_metric(tr.at(t));
        for (int i = 0; i < 3; ++i) {
            f[i].push_back(m.f[p[i]]);
            df[i].push_back(m.df[p[i]]);
        }
        up.push_back(m.u_prime);
    }
    const double alpha = -polyfit(ts, up, kWindowDegree, T)[1];
    if (end.kind == ClosingSpec::Kind::FixedPointEnd) {
        FixedPoint fp;
        for (int i = 0; i < 3; ++i) fp.a[i] = -2.0 * polyfit(ts, df[i], kWindowDegree, T)[2] / 3.0;
        return SolitonParams(tr.lambda, fp);
    }
    const int n = end.n;
    const double f2 = polyfit(ts, f[1], kWindowDegree, T)[0];
    const double f3 = polyfit(ts, f[2], kWindowDegree, T)[0];
    double gamma = 0.0;
    if (n == 1 || n == 2 || n == 4) {
        std::vector<double> g;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const double a = f[1][k] * f[1][k], b = f[2][k] * f[2][k];
            g.push_back((a - b) / (a + b));
        }
        const auto c = polyfit(ts, g, kWindowDegree, T);
        // g = gamma (T - t)^(4/n) + ...
        gamma = n == 4 ? -c[1] : n == 2 ? c[2] : c[4];
    }
    return SolitonParams(tr.lambda, Bolt{n, alpha, n / (f2 * f3), gamma});
}

SolResult sol(const SolitonParams& params, const ClosingSpec& end, const SolOptions& opt) {
    if (params.lambda < 0.0) throw std::invalid_argument("sol: needs lambda >= 0");
    StopConditions stops;
    stops.xi_floor = opt.C;
    stops.t_max = opt.t_max;
    SolResult r;
    r.trajectory = integrate(init_start(params, opt.delta), params.lambda, System::Su2, stops, opt.tol);
    if (r.trajectory.event != Termination::XiThreshold) return r;
    const PhaseState& s = r.trajectory.back();
    r.t0 = s.t;
    for (const auto& p : admissible_permutations(end)) {
        double v;
        try {
            v = sol_value(s, end, p);
        } catch (const std::domain_error&) {
            continue;
        }
        if (v < r.value) {
            r.value = v;
            r.perm = p;
        }
    }
    r.closed = std::isfinite(r.value);
    if (r.closed) r.T = extrapolate_T(r.trajectory);
    return r;
}

std::vector<HeatCell> sol_heatmap(const ScanRegion& region, const ClosingSpec& end, const SolOptions& opt,
                                  unsigned threads) {
    if (region.x.count < 1 || region.y.count < 1 || region.x.count * region.y.count < 2)
        throw std::invalid_argument("sol_heatmap: need at least two cells");
    const std::size_t nx = region.x.count, ny = region.y.count;
    std::vector<HeatCell> cells(nx * ny);
    parallel_for(cells.size(), threads, [&](std::size_t idx) {
        HeatCell& c = cells[idx];
        c.x = region.x.value(static_cast<int>(idx / ny));
        c.y = region.y.value(static_cast<int>(idx % ny));
        try {
            c.sol = sol(with_coordinate(with_coordinate(region.base, region.x.name, c.x), region.y.name, c.y), end, opt)
                        .value;
        } catch (const std::exception&) {
            c.sol = std::numeric_limits<double>::infinity();
        }
    });
    return cells;
}

void write_heatmap_csv(std::ostream& os, const ScanRegion& region, const std::vector<HeatCell>& cells) {
    (void)region;
    write_csv_row(os, {"axis1", "axis2", "sol"});
    for (const auto& c : cells) write_csv_row(os, {fmt_real(c.x), fmt_real(c.y), fmt_real(c.sol)});
}

namespace {

std::vector<double> free_coords(const SolitonParams& p) {
    if (!p.is_bolt()) {
        const auto& a = p.fixed().a;
        return {a[0], a[1], a[2]};
    }
    const auto& b = p.bolt();
    if (b.n == 1 || b.n == 2 || b.n == 4) return {b.alpha, b.beta, b.gamma};
    return {b.alpha, b.beta};
}

SolitonParams from_coords(const SolitonParams& seed, const double* x) {
    if (!seed.is_bolt()) return SolitonParams(seed.lambda, FixedPoint{{x[0], x[1], x[2]}});
    Bolt b = seed.bolt();
    b.alpha = x[0];
    b.beta = x[1];
    if (b.n == 1 || b.n == 2 || b.n == 4) b.gamma = x[2];
    return SolitonParams(seed.lambda, b);
}

struct Objective {
    const SolitonParams* seed;
    const ClosingSpec* end;
    const SolOptions* opt;
    std::vector<double> x0;
    double radius;
    int evaluations = 0;
};

double objective(const gsl_vector* v, void* data) {
    auto* o = static_cast<Objective*>(data);
    double d2 = 0.0;
    for (std::size_t i = 0; i < o->x0.size(); ++i) d2 += std::pow(gsl_vector_get(v, i) - o->x0[i], 2);
    const double penalty = 1e6;
    if (d2 > o->radius * o->radius) return penalty + d2;
    std::vector<double> x(o->x0.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = gsl_vector_get(v, i);
    ++o->evaluations;
    try {
        const SolitonParams p = from_coords(*o->seed, x.data());
        if (p.is_bolt() && p.bolt().beta < 0.0) return penalty + d2;
        const double s = sol(p, *o->end, *o->opt).value;
        return std::isfinite(s) ? s : penalty;
    } catch (const std::exception&) {
        return penalty;
    }
}

}  // namespace

Candidate refine_candidate(const SolitonParams& seed, const ClosingSpec& end, double radius, const SolOptions& opt,
                           int max_iter) {
    Candidate best{seed, std::numeric_limits<double>::infinity(), std::nullopt};
    const SolResult s0 = sol(seed, end, opt);
    best.sol = s0.value;
    auto fill_end = [&](Candidate& c, const SolResult& r) {
        if (!r.closed) return;
        c.T = r.T;
        try {
            c.end = far_end_parameters(r.trajectory, r.T, end, r.perm);
        } catch (const std::exception&) {
            c.end.reset();
        }
    };
    fill_end(best, s0);
    if (!s0.closed || !(radius > 0.0)) return best;

    Objective obj{&seed, &end, &opt, free_coords(seed), radius};
    const std::size_t dim = obj.x0.size();
    gsl_set_error_handler_off();
    gsl_vector* x = gsl_vector_alloc(dim);
    gsl_vector* step = gsl_vector_alloc(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        gsl_vector_set(x, i, obj.x0[i]);
        gsl_vector_set(step, i, 0.25 * radius);
    }
    gsl_multimin_function fn{&objective, dim, &obj};
    gsl_multimin_fminimizer* mz = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
    gsl_multimin_fminimizer_set(mz, &fn, x, step);
    for (int it = 0; it < max_iter; ++it) {
        if (gsl_multimin_fminimizer_iterate(mz) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(mz), 1e-9) == GSL_SUCCESS) break;
    }
    std::vector<double> xb(dim);
    for (std::size_t i = 0; i < dim; ++i) xb[i] = gsl_vector_get(mz->x, i);
    const double fbest = mz->fval;
    gsl_multimin_fminimizer_free(mz);
    gsl_vector_free(x);
    gsl_vector_free(step);

    best.evaluations = obj.evaluations + 1;
    if (fbest < best.sol) {
        const SolitonParams p = from_coords(seed, xb.data());
        const SolResult r = sol(p, end, opt);
        if (r.closed && r.value < best.sol) {
            Candidate c{p, r.value, std::nullopt};
            c.evaluations = best.evaluations;
            fill_end(c, r);
            return c;
        }
    }
    return best;
}

}  // namespace soliton
