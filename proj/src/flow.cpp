#include "soliton/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/numeric/odeint.hpp>

namespace soliton {

namespace odeint = boost::numeric::odeint;

const char* termination_name(Termination e) {
    switch (e) {
        case Termination::Horizon: return "horizon";
        case Termination::XiThreshold: return "xi_threshold";
        case Termination::BlowUp: return "blow_up";
        case Termination::Collapse: return "collapse";
        case Termination::EinsteinPoint: return "einstein_point";
        case Termination::KahlerPoint: return "kahler_point";
    }
    return "?";
}

PhaseState Trajectory::at(double t) const {
    if (samples.empty()) throw std::logic_error("Trajectory::at on empty trajectory");
    if (t <= samples.front().t) return samples.front();
    if (t >= samples.back().t) return samples.back();
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double x, const PhaseState& s) { return x < s.t; });
    const std::size_t i1 = static_cast<std::size_t>(it - samples.begin());
    const std::size_t i0 = i1 - 1;
    const double t0 = samples[i0].t, t1 = samples[i1].t, h = t1 - t0;
    const double s = (t - t0) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    PhaseState r;
    r.t = t;
    for (int m = 0; m < 7; ++m)
        r.v[m] = h00 * samples[i0].v[m] + h10 * h * slopes[i0][m] + h01 * samples[i1].v[m] + h11 * h * slopes[i1][m];
    return r;
}

namespace {

using State = PhaseVector;

double dist6(const PhaseVector& y, const PhaseVector& p) {
    double s = 0.0;
    for (int m = 1; m < 7; ++m) s += (y[m] - p[m]) * (y[m] - p[m]);
    return std::sqrt(s);
}

bool all_finite(const PhaseVector& y) {
    return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

struct Event {
    Termination kind;
    std::function<double(const PhaseVector&)> g;  // event when g changes from > 0 to <= 0
};

}  // namespace

Trajectory integrate(const PhaseState& start, double lambda, System system, const StopConditions& stops,
                     double tol) {
    if (!(start.t > 0.0)) throw std::invalid_argument("integrate: start time must be positive");
    if (!(tol >= 1e-13 && tol <= 1e-6)) throw std::invalid_argument("integrate: tol must lie in [1e-13, 1e-6]");
    if (!(stops.t_max > start.t)) throw std::invalid_argument("integrate: t_max must exceed the start time");
    if (!all_finite(start.v)) throw std::invalid_argument("integrate: non-finite start state");

    std::vector<Event> events;
    if (system != System::Slow)
        events.push_back({Termination::XiThreshold, [f = stops.xi_floor](const PhaseVector& y) { return y[kXi] - f; }});
    events.push_back({Termination::BlowUp, [c = stops.norm_ceiling](const PhaseVector& y) {
                          double m = 0.0;
                          for (double x : y) m = std::max(m, std::abs(x));
                          return c - m;
                      }});
    if (stops.collapse_floor > 0.0)
        events.push_back({Termination::Collapse, [inv = 1.0 / stops.collapse_floor](const PhaseVector& y) {
                              double p = std::max({y[5] * y[6], y[4] * y[6], y[4] * y[5]});
                              return inv - p;
                          }});
    if (lambda < 0.0 && stops.critical_radius > 0.0)
        events.push_back({Termination::EinsteinPoint, [p = einstein_point(lambda), r = stops.critical_radius](
                                                          const PhaseVector& y) { return dist6(y, p) - r; }});
    if (lambda < 0.0 && stops.kahler_radius > 0.0) {
        std::array<PhaseVector, 3> ks{kahler_point(0, lambda), kahler_point(1, lambda), kahler_point(2, lambda)};
        events.push_back({Termination::KahlerPoint, [ks, r = stops.kahler_radius](const PhaseVector& y) {
                              double d = dist6(y, ks[0]);
                              d = std::min({d, dist6(y, ks[1]), dist6(y, ks[2])});
                              return d - r;
                          }});
    }

    auto f = [system, lambda](const State& x, State& dxdt, double) { dxdt = rhs(system, x, lambda); };
    auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());

    Trajectory tr;
    tr.system = system;
    tr.lambda = lambda;
    auto push = [&](double t, PhaseVector y) {
        if (system == System::Einstein) y[kXi] = y[1] + y[2] + y[3];
        tr.samples.push_back(PhaseState{t, y});
        tr.slopes.push_back(rhs(system, y, lambda));
    };
    push(start.t, start.v);

    for (const auto& e : events)
        if (e.g(start.v) <= 0.0) {
            tr.event = e.kind;
            return tr;
        }

    const PhaseVector f0 = rhs(system, start.v, lambda);
    double ny = 0.0, nf = 0.0;
    for (int m = 0; m < 7; ++m) {
        ny = std::max(ny, std::abs(start.v[m]));
        nf = std::max(nf, std::abs(f0[m]));
    }
    double dt0 = nf > 0.0 ? 1e-3 * std::max(ny, 1e-3) / nf : 1e-3;
    dt0 = std::min(dt0, 0.01 * (stops.t_max - start.t));

    stepper.initialize(start.v, start.t, dt0);
    constexpr long kMaxSteps = 2000000;
    State xm;
    for (long step = 0; step < kMaxSteps; ++step) {
        std::pair<double, double> span;
        try {
            span = stepper.do_step(f);
        } catch (const std::exception&) {
            tr.event = Termination::BlowUp;
            return tr;
        }
        double t0 = span.first, t1 = span.second;
        bool horizon = false;
        if (t1 >= stops.t_max) {
            t1 = stops.t_max;
            horizon = true;
        }
        State x1;
        if (horizon)
            stepper.calc_state(t1, x1);
        else
            x1 = stepper.current_state();

        if (!all_finite(x1)) {
            tr.event = Termination::BlowUp;
            return tr;
        }
        // earliest event inside (t0, t1]
        int hit = -1;
        double t_hit = t1;
        for (std::size_t e = 0; e < events.size(); ++e) {
            if (events[e].g(x1) > 0.0) continue;
            double a = t0, b = t1;
            while (b - a > 1e-9 * std::max(1.0, std::abs(b)) && b - a > 1e-12) {
                const double m = 0.5 * (a + b);
                stepper.calc_state(m, xm);
                if (events[e].g(xm) > 0.0)
                    a = m;
                else
                    b = m;
            }
            if (b < t_hit || hit < 0) {
                t_hit = b;
                hit = static_cast<int>(e);
            }
        }
        if (hit >= 0) {
            State xh;
            stepper.calc_state(t_hit, xh);
            if (t_hit > tr.samples.back().t) push(t_hit, xh);
            tr.event = events[hit].kind;
            return tr;
        }
        push(t1, x1);
        if (horizon) {
            tr.event = Termination::Horizon;
            return tr;
        }
    }
    tr.event = Termination::BlowUp;
    return tr;
}

double find_T(const SolitonParams& params, double C, double delta, double tol, double t_max) {
    if (params.lambda < 0.0) throw std::invalid_argument("find_T: needs lambda >= 0");
    StopConditions stops;
    stops.xi_floor = C;
    stops.t_max = t_max;
    const Trajectory tr = integrate(init_start(params, delta), params.lambda, System::Su2, stops, tol);
    if (tr.event != Termination::XiThreshold) throw NoCrossing("find_T: xi never reaches the threshold");
    return tr.t_end();
}

std::vector<MetricSample> reconstruct_metric(const Trajectory& traj, bool degenerate) {
    std::vector<MetricSample> out;
    out.reserve(traj.samples.size());
    if (!degenerate) {
        for (const auto& s : traj.samples) out.push_back(to_metric(s));
        return out;
    }
    const double inf = std::numeric_limits<double>::infinity();
    double logf = std::log(traj.samples.front().t);
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        if (i > 0) {
            const auto& p = traj.samples[i - 1];
            const double h = s.t - p.t;
            const double m0 = traj.slopes[i - 1][1], m1 = traj.slopes[i][1];
            logf += 0.5 * h * (p.L(0) + s.L(0)) + h * h * (m0 - m1) / 12.0;
        }
        MetricSample m;
        m.t = s.t;
        m.f = {std::exp(logf), inf, inf};
        m.df = {s.L(0) * m.f[0], inf, inf};
        m.u_prime = s.L(0) + s.L(1) + s.L(2) - s.xi();
        out.push_back(m);
    }
    return out;
}

std::vector<MetricSample> reconstruct_metric(const Trajectory& traj, const SolitonParams& params) {
    return reconstruct_metric(traj, params.degenerate() || traj.system == System::ReducedBeta0);
}

}  // namespace soliton
