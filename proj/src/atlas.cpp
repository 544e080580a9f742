#include "soliton/atlas.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "soliton/io.hpp"

namespace soliton {

std::string_view class_name(AsymptoticClass c) {
    switch (c) {
        case AsymptoticClass::EinsteinAttractor: return "EINSTEIN";
        case AsymptoticClass::AsymptoticallyConical: return "CONICAL";
        case AsymptoticClass::KahlerCritical: return "KAHLER";
        case AsymptoticClass::DivergentOrIncomplete: return "DIVERGENT";
        case AsymptoticClass::Undecided: return "UNDECIDED";
    }
    return "?";
}

bool conical_at(const PhaseState& s, double lambda, const ClassifyOptions& opt, double* residual) {
    const double c = std::sqrt(-lambda);
    const double xi = s.xi() / c, tn = c * s.t;
    const double r = xi - (s.L(0) + s.L(1) + s.L(2)) / c;
    double res = std::abs(xi / r - 1.0);
    double rb = 0.0;
    for (int i = 0; i < 3; ++i) {
        res = std::max(res, std::abs(s.L(i) / c * r - 1.0));
        rb = std::max(rb, std::abs(s.R(i) / c * r));
    }
    if (residual) *residual = res;
    return r > 0.5 * tn && res < opt.tol_cone && rb < opt.r_bound;
}

bool is_einstein_params(const SolitonParams& p) {
    double scale = std::abs(p.lambda);
    if (!p.is_bolt())
        for (double a : p.fixed().a) scale += 3.0 * std::abs(a);
    return std::abs(p.alpha()) <= 1e-12 * std::max(scale, 1.0);
}

namespace {

Classification run_once(const SolitonParams& params, const ClassifyOptions& opt, double horizon) {
    const double lambda = params.lambda;
    const double c = std::sqrt(-lambda);
    const bool einstein = is_einstein_params(params);
    PhaseState start = init_start(params, opt.delta);
    if (einstein) start = enforce_einstein(start, lambda);

    StopConditions stops;
    stops.t_max = horizon / c;
    stops.xi_floor = -20.0 * c;
    stops.critical_radius = opt.critical_radius * c;
    stops.kahler_radius = opt.kahler_radius * c;
    const Trajectory tr = integrate(start, lambda, einstein ? System::Einstein : System::Su2, stops, opt.tol);

    Classification out;
    out.event = tr.event;
    out.horizon_t = tr.t_end();
    if (einstein) {
        double h = 0.0;
        for (const auto& s : tr.samples) h = std::max(h, std::abs(einstein_constraint(s, lambda)) / (c * c));
        out.defect = h;
    } else {
        out.defect = std::numeric_limits<double>::quiet_NaN();
    }
    switch (tr.event) {
        case Termination::EinsteinPoint: out.cls = AsymptoticClass::EinsteinAttractor; break;
        case Termination::KahlerPoint: out.cls = AsymptoticClass::KahlerCritical; break;
        case Termination::BlowUp:
        case Termination::Collapse:
        case Termination::XiThreshold: out.cls = AsymptoticClass::DivergentOrIncomplete; break;
        case Termination::Horizon: {
            double res = 0.0;
            const bool cone = conical_at(tr.back(), lambda, opt, &res);
            if (!einstein) out.defect = res;
            out.cls = cone ? AsymptoticClass::AsymptoticallyConical : AsymptoticClass::Undecided;
            break;
        }
    }
    return out;
}

}  // namespace

Classification classify(const SolitonParams& params, const ClassifyOptions& opt) {
    if (!(params.lambda < 0.0)) throw std::invalid_argument("classify: expanders need lambda < 0");
    Classification c = run_once(params, opt, opt.horizon);
    if (c.cls == AsymptoticClass::Undecided && opt.retry) c = run_once(params, opt, 2.0 * opt.horizon);
    return c;
}

SolitonParams with_coordinate(const SolitonParams& base, const std::string& name, double value) {
    if (base.is_bolt()) {
        Bolt b = base.bolt();
        if (name == "alpha")
            b.alpha = value;
        else if (name == "beta")
            b.beta = value;
        else if (name == "gamma")
            b.gamma = value;
        else
            throw std::invalid_argument("unknown bolt axis '" + name + "'");
        return SolitonParams(base.lambda, b);
    }
    double alpha = base.alpha();
    const auto& a0 = base.fixed().a;
    double d12 = a0[0] - a0[1], d23 = a0[1] - a0[2];
    if (name == "alpha")
        alpha = value;
    else if (name == "d12")
        d12 = value;
    else if (name == "d23")
        d23 = value;
    else
        throw std::invalid_argument("unknown fixed-point axis '" + name + "'");
    const double sum = (-base.lambda - alpha) / 3.0;
    const double a2 = (sum - d12 + d23) / 3.0;
    return SolitonParams(base.lambda, FixedPoint{{a2 + d12, a2, a2 - d23}});
}

double coordinate(const SolitonParams& p, const std::string& name) {
    if (p.is_bolt()) {
        const auto& b = p.bolt();
        if (name == "alpha") return b.alpha;
        if (name == "beta") return b.beta;
        if (name == "gamma") return b.gamma;
        throw std::invalid_argument("unknown bolt axis '" + name + "'");
    }
    const auto& a = p.fixed().a;
    if (name == "alpha") return p.alpha();
    if (name == "d12") return a[0] - a[1];
    if (name == "d23") return a[1] - a[2];
    throw std::invalid_argument("unknown fixed-point axis '" + name + "'");
}

void validate(const ScanRegion& r) {
    if (r.x.count < 2 || r.y.count < 2) throw std::invalid_argument("scan: resolution must be at least 2 per axis");
    if (r.x.name == r.y.name) throw std::invalid_argument("scan: axes must differ");
    if (!(r.base.lambda < 0.0)) throw std::invalid_argument("scan: expanders need lambda < 0");
    for (double xv : {r.x.lo, r.x.hi})
        for (double yv : {r.y.lo, r.y.hi}) {
            const SolitonParams p = with_coordinate(with_coordinate(r.base, r.x.name, xv), r.y.name, yv);
            const double tiny = -1e-14;
            if (p.is_bolt()) {
                const auto& b = p.bolt();
                if (b.alpha < tiny || b.beta < tiny || b.gamma < tiny)
                    throw std::invalid_argument("scan: region leaves the admissible cone alpha, beta, gamma >= 0");
            } else {
                if (coordinate(p, "alpha") < tiny || coordinate(p, "d12") < tiny || coordinate(p, "d23") < tiny)
                    throw std::invalid_argument("scan: region leaves the admissible cone alpha, d12, d23 >= 0");
            }
        }
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& f) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    if (!failed.exchange(true)) err = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

unsigned threads_from_env(unsigned fallback) {
    const char* env = std::getenv("SOLITON_THREADS");
    if (!env) return fallback;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || v < 1) return fallback;
    return static_cast<unsigned>(v);
}

std::vector<ScanCell> scan(const ScanRegion& region, const ClassifyOptions& opt, unsigned threads) {
    validate(region);
    const std::size_t nx = region.x.count, ny = region.y.count;
    std::vector<ScanCell> cells(nx * ny);
    parallel_for(cells.size(), threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx / ny), j = static_cast<int>(idx % ny);
        ScanCell& c = cells[idx];
        c.x = region.x.value(i);
        c.y = region.y.value(j);
        try {
            c.c = classify(with_coordinate(with_coordinate(region.base, region.x.name, c.x), region.y.name, c.y), opt);
        } catch (const std::exception&) {
            c.c.cls = AsymptoticClass::Undecided;
            c.c.defect = std::numeric_limits<double>::quiet_NaN();
        }
    });
    return cells;
}

void write_scan_csv(std::ostream& os, const ScanRegion& region, const std::vector<ScanCell>& cells) {
    write_csv_row(os, {region.x.name, region.y.name, "class", "horizon_t", "defect"});
    for (const auto& c : cells)
        write_csv_row(os, {fmt_real(c.x), fmt_real(c.y), std::string(class_name(c.c.cls)), fmt_real(c.c.horizon_t),
                           fmt_real(c.c.defect)});
}

std::vector<BoundaryPoint> boundary_trace(int n, const std::vector<double>& alphas, const ClassifyOptions& opt,
                                          double beta_tol, double lambda, unsigned threads) {
    if (n < 3) throw std::invalid_argument("boundary_trace: needs n >= 3");
    std::vector<BoundaryPoint> out(alphas.size());
    parallel_for(alphas.size(), threads, [&](std::size_t idx) {
        const double alpha = alphas[idx];
        auto diverges = [&](double beta) {
            return classify(SolitonParams(lambda, Bolt{n, alpha, beta, 0.0}), opt).cls ==
                   AsymptoticClass::DivergentOrIncomplete;
        };
        BoundaryPoint bp;
        bp.alpha = alpha;
        double lo = 0.05, hi = 1.0;
        if (diverges(lo)) {
            out[idx] = bp;
            return;
        }
        while (!diverges(hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > 64.0) {
                out[idx] = bp;
                return;
            }
        }
        while (hi - lo > beta_tol) {
            const double mid = 0.5 * (lo + hi);
            (diverges(mid) ? hi : lo) = mid;
        }
        bp.beta_max = 0.5 * (lo + hi);
        bp.ok = true;
        out[idx] = bp;
    });
    return out;
}

double u2_einstein_constant(int n, double beta) {
    return (2.0 * (2.0 + n) * beta + n) * (2.0 * (2.0 - n) * beta + n) / (4.0 * n * n * n * beta);
}

}  // namespace soliton
