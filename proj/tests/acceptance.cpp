#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cli_app.hpp"
#include "soliton/atlas.hpp"
#include "soliton/flow.hpp"
#include "soliton/kahler.hpp"
#include "soliton/reference.hpp"
#include "soliton/shooter.hpp"

using namespace soliton;

namespace {

const double s3 = std::sqrt(3.0);

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

unsigned worker_count() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return threads_from_env(std::min(hw, 8u));
}

Trajectory run(const PhaseState& s, double lambda, System sys, double t_max, double tol = kDefaultTol) {
    StopConditions stops;
    stops.t_max = t_max;
    return integrate(s, lambda, sys, stops, tol);
}

Verdict criterion1() {
    Verdict v;
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (const auto& s : catalog()) worst = std::max(worst, residual(s, 100));
    const double dt = seconds_since(t0);
    v.require(catalog().size() == 10, "10 reference solutions");
    v.require(worst < 1e-9, "max residual " + fmt("%.2e", worst));
    v.require(dt < 1.0, "runtime " + fmt("%.3f", dt) + " s");
    return v;
}

Verdict criterion2() {
    Verdict v;
    const SolitonParams g(-1.0, FixedPoint{{0, 0, 0}});
    const double xi2 = run(init_fixed(g, 0.001), -1.0, System::Su2, 2.0).back().xi();
    v.require(std::abs(xi2 - 3.5) < 1e-7, "|xi(2) - 3.5| = " + fmt("%.2e", std::abs(xi2 - 3.5)));
    const SolitonParams b(-1.0, Bolt{1, 0.0, 0.0, 0.0});
    const double xi1 = run(init_start(b), -1.0, System::ReducedBeta0, 1.0).back().xi();
    const double want = s3 * (std::exp(2 * s3) + 1) / (std::exp(2 * s3) - 1);
    v.require(std::abs(xi1 - want) < 1e-6, "beta = 0 xi(1) error " + fmt("%.2e", std::abs(xi1 - want)));
    return v;
}

Verdict criterion3() {
    Verdict v;
    // alpha = 0 starts, full seven-equation system
    const std::vector<SolitonParams> einstein{
        SolitonParams(-1.0, FixedPoint{{1.0 / 9, 1.0 / 9, 1.0 / 9}}),
        SolitonParams(-1.0, FixedPoint{{1.0 / 9 + 0.1, 1.0 / 9 - 0.05, 1.0 / 9 - 0.05}}),
        SolitonParams(-1.0, FixedPoint{{1.0 / 9 + 0.06, 1.0 / 9, 1.0 / 9 - 0.06}}),
        SolitonParams(-1.0, Bolt{2, 0.0, 0.5, 0.0}),
        SolitonParams(-1.0, Bolt{3, 0.0, 1.0, 0.0}),
        SolitonParams(-1.0, Bolt{4, 0.0, 0.7, 0.2}),
    };
    double worst_e = 0.0;
    for (const auto& p : einstein) {
        const Trajectory tr = run(enforce_einstein(init_start(p), p.lambda), p.lambda, System::Su2, 5.0);
        if (tr.t_end() < 5.0) v.require(false, describe(p) + " stopped early");
        for (const auto& s : tr.samples) worst_e = std::max(worst_e, std::abs(einstein_defect(s)));
    }
    v.require(worst_e < 1e-6, "alpha = 0 max |xi - sum L| " + fmt("%.2e", worst_e));

    double worst_k = 0.0;
    for (int n : {3, 4, 5, 6}) {
        const double beta = n / (2.0 * n - 4.0);  // (4 - 2n) beta = n lambda, lambda = -1
        for (double alpha : {0.25, 1.0}) {
            const SolitonParams p(-1.0, Bolt{n, alpha, beta, 0.0});
            const Trajectory tr =
                run(enforce_kahler_bolt(init_start(p), -1.0, n, alpha), -1.0, System::Su2, 5.0);
            for (const auto& s : tr.samples)
                if (const auto d = kahler_defects(s, -1.0, KahlerBolt{1, n, alpha}))
                    worst_k = std::max({worst_k, std::abs(d->first), std::abs(d->second)});
        }
    }
    v.require(worst_k < 1e-6, "Kahler locus max defect " + fmt("%.2e", worst_k));
    return v;
}

Verdict criterion4() {
    Verdict v;
    Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(einstein_linearization(-1.0));
    std::vector<double> ev;
    double imag = 0.0;
    for (int i = 0; i < 6; ++i) {
        ev.push_back(es.eigenvalues()[i].real());
        imag = std::max(imag, std::abs(es.eigenvalues()[i].imag()));
    }
    std::sort(ev.begin(), ev.end());
    const std::vector<double> want{-2 * s3, -s3, -s3, -1 / s3, -1 / s3, -1 / s3};
    double err = imag;
    for (int i = 0; i < 6; ++i) err = std::max(err, std::abs(ev[i] - want[i]));
    v.require(err < 1e-10, "Einstein point spectrum error " + fmt("%.1e", err));

    auto match = [](const SingularKind& k, std::vector<double> w) {
        std::sort(w.begin(), w.end());
        const auto got = desingularization_spectrum(k);
        if (got.size() != w.size()) return false;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (std::abs(got[i] - w[i]) > 1e-12) return false;
        return true;
    };
    bool ok = match(FixedPointKind{}, {-5, -5, -3, -2, 1, 1, 1});
    for (int n : {1, 2, 3, 4, 5, 8}) ok = ok && match(BoltKind{n}, {-1.0 - 4.0 / n, -1.0 + 4.0 / n, -2, -1, -1, 1, 1});
    v.require(ok, "singular-orbit spectra");
    return v;
}

Verdict criterion5() {
    Verdict v;
    const std::vector<double> grid{0.1, 0.5, 1.0, 2.0, 3.0};
    const std::vector<std::pair<double, double>> pairs{{0.0, 0.5}, {0.5, 1.0}, {1.0, 1.5}};
    int checks = 0, bad = 0;
    for (const auto& [a0, a1] : pairs) {
        // beta = 0 reduced system
        const Trajectory lo = run(init_start(SolitonParams(-1.0, Bolt{1, a0, 0.0, 0.0})), -1.0, System::ReducedBeta0, 3.5);
        const Trajectory hi = run(init_start(SolitonParams(-1.0, Bolt{1, a1, 0.0, 0.0})), -1.0, System::ReducedBeta0, 3.5);
        for (double t : grid) {
            const PhaseState x = lo.at(t), y = hi.at(t);
            for (int i = 0; i < 2; ++i) {
                ++checks;
                bad += !(y.L(i) > 0.0 && y.L(i) < x.L(i));
            }
            ++checks;
            bad += !(y.xi() > x.xi());
        }
        // SO(4) system; every pair has alpha0 <= 1
        auto so4 = [](double alpha) {
            const double a = (1.0 - alpha) / 9.0;
            return SolitonParams(-1.0, FixedPoint{{a, a, a}});
        };
        const Trajectory slo = run(init_start(so4(a0)), -1.0, System::So4, 3.5);
        const Trajectory shi = run(init_start(so4(a1)), -1.0, System::So4, 3.5);
        for (double t : grid) {
            const PhaseState x = slo.at(t), y = shi.at(t);
            checks += 3;
            bad += !(y.xi() > x.xi());
            bad += !(y.L(0) > 0.0 && y.L(0) < x.L(0));
            bad += !(y.R(0) > x.R(0) && x.R(0) > 0.0);
        }
    }
    v.require(bad == 0, std::to_string(checks - bad) + "/" + std::to_string(checks) + " orderings hold");
    return v;
}

Verdict criterion6() {
    Verdict v;
    struct Case {
        const char* what;
        SolitonParams p;
        AsymptoticClass want;
    };
    const std::vector<Case> cases{
        {"(1,1,0) on O(-4)", SolitonParams(-1.0, Bolt{4, 1.0, 1.0, 0.0}), AsymptoticClass::AsymptoticallyConical},
        {"alpha=0 beta=0.5 on O(-2)", SolitonParams(-1.0, Bolt{2, 0.0, 0.5, 0.0}), AsymptoticClass::EinsteinAttractor},
        {"differences (1/6,0)", SolitonParams(-1.0, FixedPoint{{2.0 / 9, 1.0 / 18, 1.0 / 18}}),
         AsymptoticClass::KahlerCritical},
    };
    for (const auto& c : cases) {
        const auto t0 = Clock::now();
        const Classification r = classify(c.p);
        const double dt = seconds_since(t0);
        v.require(r.cls == c.want && dt < 5.0,
                  std::string(c.what) + " -> " + std::string(class_name(r.cls)) + " in " + fmt("%.3f", dt) + " s");
    }
    return v;
}

Verdict criterion7() {
    Verdict v;
    const unsigned threads = worker_count();
    for (int n : {3, 5, 10}) {
        const double target = n / (2.0 * n - 4.0);
        const BoundaryPoint b = boundary_trace(n, {0.05}, {}, 1e-3, -1.0, threads).at(0);
        v.require(b.ok && std::abs(b.beta_max - target) <= 0.15,
                  "n=" + std::to_string(n) + " beta_max " + fmt("%.4f", b.beta_max) + " vs " + fmt("%.4f", target));
    }
    const ScanRegion region{SolitonParams(-1.0, Bolt{4, 1.0, 1.0, 0.0}), {"alpha", 0.04, 2.0, 50},
                            {"beta", 0.04, 2.0, 50}};
    const auto t0 = Clock::now();
    const auto cells = scan(region, {}, threads);
    const double dt = seconds_since(t0);
    v.require(cells.size() == 2500 && dt < 300.0,
              "50x50 n=4 scan in " + fmt("%.1f", dt) + " s on " + std::to_string(threads) + " threads");
    return v;
}

Verdict criterion8() {
    Verdict v;
    for (const auto& s : catalog()) {
        if (!s.compact()) continue;
        const SolResult r = sol(s.start, *s.closing);
        const double terr = std::abs(r.T - s.t_hi);
        v.require(r.closed && r.value < 1e-2, s.name + " SOL " + fmt("%.4g", r.value));
        v.require(r.closed && terr < 1e-3, s.name + " T error " + fmt("%.1e", terr));
    }
    return v;
}

Verdict criterion9() {
    Verdict v;
    const auto roots = h1_nonzero_roots(1.0, 1.0);
    const bool one = roots.size() == 1 && roots[0] > -0.53 && roots[0] < -0.52;
    v.require(one, "h1 root " + (roots.empty() ? std::string("none") : fmt("%.10f", roots[0])));
    if (!one) return v;
    const double C = -roots[0];
    const KahlerProfile p = build_profile(BoltInc{1, 1}, C);
    const double F = p.f_end * p.f_end;
    v.require(p.kind == ProfileCase::Compact && std::abs(F - 6.0) < 1e-6, "f(T)^2 = " + fmt("%.10f", F));

    // phase parameters at the increasing bolt: beta = n / f(0)^2, alpha = -u''(0) = -C f f''(0), gamma = 0
    const double fa = p.f_start;
    const double alpha = -0.5 * C * fa * p.dP(fa);
    const SolitonParams start(1.0, Bolt{1, alpha, 1.0 / (fa * fa), 0.0});
    const SolResult r = sol(start, ClosingSpec::bolt(1));
    v.require(r.closed && r.value < 1e-3, "shooter SOL " + fmt("%.4g", r.value) + " at alpha " + fmt("%.6f", alpha));
    const Candidate c = refine_candidate(start, ClosingSpec::bolt(1), 0.05);
    v.require(c.sol < 1e-3, "refined SOL " + fmt("%.4g", c.sol));
    return v;
}

Verdict criterion10() {
    Verdict v;
    struct Row {
        int n;
        double q1, q2;
        int m;
    };
    // m = 0 if both q <= n/2, 2 if both exceed n/2 and differ, 1 otherwise
    const std::vector<Row> table{{1, 1, 1, 1}, {1, 3, 5, 2}, {2, 2, 3, 2}, {4, 1, 2, 0}, {2, 1, 1, 0},
                                 {3, 1, 2, 1}, {3, 2, 2, 1}, {4, 3, 5, 2}, {1, 0.4, 0.3, 0}};
    int good = 0;
    for (const auto& r : table)
        good += count_solitons(r.n, r.q1, r.q2) == r.m && count_solitons_numeric(r.n, r.q1, r.q2) == r.m;
    v.require(good == 9, std::to_string(good) + "/9 count triples");

    v.require(h2_nonzero_roots(6.0).empty(), "L=6 no root");
    for (double L : {4.4, 4.5, 5.0}) {
        int pos = 0;
        for (double r : h2_nonzero_roots(L)) pos += r > 0.0;
        v.require(pos == 1, "L=" + fmt("%.1f", L) + " positive roots " + std::to_string(pos));
    }
    // q = 1.02 relative to the threshold n/2
    for (int n : {1, 2, 3}) {
        const double q = 1.02 * n / 2.0;
        const double ls = limsol_defect(n, q, q);
        const double want = (n - 2.0) * (n - 2.0);
        v.require(std::abs(ls - want) <= 0.15, "n=" + std::to_string(n) + " limSOL " + fmt("%.4f", ls));
    }
    return v;
}

Verdict criterion11() {
    Verdict v;
    const std::vector<std::vector<std::string>> configs{
        {"integrate", "--fixed", "0.1,0.05,0", "--horizon", "5"},
        {"classify", "--bolt", "4", "--alpha", "1", "--beta", "1"},
        {"scan", "--bolt", "4", "--beta", "1", "--x", "alpha:0.1:2:6", "--y", "beta:0.1:2:6", "--threads", "4"},
        {"shoot", "heatmap", "--bolt", "2", "--beta", "0.25", "--gamma", "0.25", "--end", "bolt:2", "--x",
         "alpha:-0.2:0.2:5", "--y", "beta:0.2:0.3:3", "--threads", "4"},
        {"shoot", "sol", "--fixed", "-0.1111111111111111,-0.1111111111111111,-0.1111111111111111", "--end", "fixed"},
        {"kahler", "limsol-sweep", "--n", "2", "--q-lo", "1.01", "--q-hi", "1.5", "--count", "5", "--threads", "4"},
        {"kahler", "profile", "--start", "inc", "--n", "1", "--q", "1", "--C", "0.5276195198969628"},
        {"oracle-check"},
    };
    auto call = [](std::vector<std::string> args, std::string& out) {
        args.insert(args.begin(), "soliton_cli");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream o, e;
        const int st = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
        out = o.str();
        return st;
    };
    int same = 0;
    for (const auto& c : configs) {
        std::string a, b;
        const int sa = call(c, a), sb = call(c, b);
        same += sa == 0 && sb == 0 && !a.empty() && a == b;
    }
    v.require(same == static_cast<int>(configs.size()),
              std::to_string(same) + "/" + std::to_string(configs.size()) + " configs byte-identical");
    return v;
}

}  // namespace

int main() {
    const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                         criterion5, criterion6, criterion7, criterion8,
                                                         criterion9, criterion10, criterion11};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i]();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        failed += !v.pass;
        std::printf("criterion %zu: %s (%s)\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
