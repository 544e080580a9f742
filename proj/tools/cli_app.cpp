#include "cli_app.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "soliton/atlas.hpp"
#include "soliton/flow.hpp"
#include "soliton/io.hpp"
#include "soliton/kahler.hpp"
#include "soliton/reference.hpp"
#include "soliton/shooter.hpp"

namespace soliton::cli {

using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double num(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
    return v.get<double>();
}

double num_or(const json& j, const std::string& key, double fallback) {
    return j.contains(key) ? num(j, key) : fallback;
}

int integer(const json& j, const std::string& key) {
    const double v = num(j, key);
    if (v != std::floor(v)) throw ConfigError("'" + key + "' must be an integer");
    return static_cast<int>(v);
}

std::string str(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_string()) throw ConfigError("'" + key + "' must be a string");
    return j.at(key).get<std::string>();
}

const json& obj(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_object()) throw ConfigError("'" + key + "' must be an object");
    return j.at(key);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw ConfigError("not a number: '" + s + "'");
    return v;
}

SolitonParams params_from(const json& cfg) {
    const json& b = obj(cfg, "boundary");
    const double lambda = num(cfg, "lambda");
    const std::string type = str(b, "type");
    try {
        if (type == "fixed") {
            if (!b.contains("a") || !b.at("a").is_array() || b.at("a").size() != 3)
                throw ConfigError("'boundary.a' must hold three numbers");
            FixedPoint fp;
            for (int i = 0; i < 3; ++i) {
                if (!b.at("a")[i].is_number()) throw ConfigError("'boundary.a' must hold three numbers");
                fp.a[i] = b.at("a")[i].get<double>();
            }
            return SolitonParams(lambda, fp);
        }
        if (type == "bolt")
            return SolitonParams(lambda, Bolt{integer(b, "n"), num_or(b, "alpha", 0.0), num_or(b, "beta", 0.0),
                                              num_or(b, "gamma", 0.0)});
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("boundary type must be 'fixed' or 'bolt'");
}

Axis axis_from(const json& cfg, const std::string& key) {
    const json& a = obj(cfg, key);
    return Axis{str(a, "name"), num(a, "lo"), num(a, "hi"), integer(a, "count")};
}

ClosingSpec end_from(const json& cfg) {
    const json& e = obj(cfg, "end");
    const std::string kind = str(e, "kind");
    const bool permute = !e.contains("permute") || e.at("permute").get<bool>();
    if (kind == "fixed") return ClosingSpec::fixed_point(permute);
    if (kind == "bolt") {
        const int n = integer(e, "n");
        if (n < 1) throw ConfigError("'end.n' must be positive");
        return ClosingSpec::bolt(n, permute);
    }
    throw ConfigError("end kind must be 'fixed' or 'bolt'");
}

KahlerBoundary kahler_start_from(const json& k) {
    const std::string s = str(k, "start");
    if (s == "vanishing") return Vanishing{};
    if (s == "inc") return BoltInc{num(k, "n"), num(k, "q")};
    if (s == "dec") return BoltDec{num(k, "n"), num(k, "q")};
    throw ConfigError("kahler start must be vanishing, inc or dec");
}

json params_json(const SolitonParams& p) {
    json j;
    j["lambda"] = p.lambda;
    if (p.is_bolt()) {
        const auto& b = p.bolt();
        j["boundary"] = {{"type", "bolt"}, {"n", b.n}, {"alpha", b.alpha}, {"beta", b.beta}, {"gamma", b.gamma}};
    } else {
        const auto& a = p.fixed().a;
        j["boundary"] = {{"type", "fixed"}, {"a", {a[0], a[1], a[2]}}};
    }
    return j;
}

void csv(std::ostream& os, std::initializer_list<std::string> cells) { write_csv_row(os, cells); }

unsigned threads_of(const json& cfg) {
    const unsigned fallback = threads_from_env(1);
    return cfg.contains("threads") ? static_cast<unsigned>(std::max(1, integer(cfg, "threads"))) : fallback;
}

SolOptions sol_options(const json& cfg) {
    SolOptions o;
    o.delta = num(cfg, "delta");
    o.C = num(cfg, "stop_xi");
    o.tol = num(cfg, "tol");
    o.t_max = num(cfg, "horizon");
    return o;
}

ClassifyOptions classify_options(const json& cfg) {
    ClassifyOptions o;
    o.delta = num(cfg, "delta");
    o.horizon = num(cfg, "horizon");
    o.tol = num(cfg, "tol");
    return o;
}

int cmd_integrate(const json& cfg, std::ostream& os) {
    const SolitonParams p = params_from(cfg);
    StopConditions stops;
    stops.t_max = num(cfg, "horizon");
    stops.xi_floor = num(cfg, "stop_xi");
    PhaseState s = init_start(p, num(cfg, "delta"));
    System sys = p.degenerate() ? System::ReducedBeta0 : System::Su2;
    if (cfg.contains("system") && str(cfg, "system") == "einstein") {
        s = enforce_einstein(s, p.lambda);
        sys = System::Einstein;
    }
    const Trajectory tr = integrate(s, p.lambda, sys, stops, num(cfg, "tol"));
    const auto metric = reconstruct_metric(tr, p);
    csv(os, {"t", "xi", "L1", "L2", "L3", "R1", "R2", "R3", "f1", "f2", "f3", "df1", "df2", "df3", "u_prime"});
    for (std::size_t k = 0; k < tr.samples.size(); ++k) {
        const auto& st = tr.samples[k];
        const auto& m = metric[k];
        std::vector<std::string> row{fmt_real(st.t)};
        for (double v : st.v) row.push_back(fmt_real(v));
        for (double v : m.f) row.push_back(fmt_real(v));
        for (double v : m.df) row.push_back(fmt_real(v));
        row.push_back(fmt_real(m.u_prime));
        write_csv_row(os, row);
    }
    return kOk;
}

int cmd_classify(const json& cfg, std::ostream& os) {
    const Classification c = classify(params_from(cfg), classify_options(cfg));
    csv(os, {"class", "horizon_t", "defect", "event"});
    csv(os, {std::string(class_name(c.cls)), fmt_real(c.horizon_t), fmt_real(c.defect), termination_name(c.event)});
    return kOk;
}

int cmd_scan(const json& cfg, std::ostream& os) {
    const ScanRegion region{params_from(cfg), axis_from(cfg, "x"), axis_from(cfg, "y")};
    try {
        validate(region);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto cells = scan(region, classify_options(cfg), threads_of(cfg));
    write_scan_csv(os, region, cells);
    return kOk;
}

int cmd_shoot(const json& cfg, std::ostream& os) {
    const std::string mode = str(cfg, "mode");
    const ClosingSpec end = end_from(cfg);
    const SolOptions opt = sol_options(cfg);
    if (mode == "sol") {
        const SolResult r = sol(params_from(cfg), end, opt);
        csv(os, {"sol", "closed", "t0", "T", "perm"});
        std::ostringstream perm;
        perm << r.perm[0] + 1 << r.perm[1] + 1 << r.perm[2] + 1;
        csv(os, {fmt_real(r.value), r.closed ? "1" : "0", fmt_real(r.t0), fmt_real(r.T), perm.str()});
        return kOk;
    }
    if (mode == "heatmap") {
        const ScanRegion region{params_from(cfg), axis_from(cfg, "x"), axis_from(cfg, "y")};
        if (region.x.count < 1 || region.y.count < 1 || region.x.count * region.y.count < 2)
            throw ConfigError("heatmap needs at least two cells");
        write_heatmap_csv(os, region, sol_heatmap(region, end, opt, threads_of(cfg)));
        return kOk;
    }
    if (mode == "refine") {
        const Candidate c = refine_candidate(params_from(cfg), end, num(cfg, "radius"), opt);
        json report;
        report["start_params"] = params_json(c.start);
        report["end_params"] = c.end ? params_json(*c.end) : json();
        report["sol"] = std::isfinite(c.sol) ? json(c.sol) : json("INF");
        report["T"] = c.T;
        report["evaluations"] = c.evaluations;
        os << report.dump(2) << "\n";
        return kOk;
    }
    throw ConfigError("shoot mode must be sol, heatmap or refine");
}

int cmd_kahler(const json& cfg, std::ostream& os) {
    const std::string mode = str(cfg, "mode");
    const json& k = obj(cfg, "kahler");
    if (mode == "profile") {
        const KahlerProfile p = build_profile(kahler_start_from(k), num(k, "C"), integer(k, "samples"));
        json report;
        report["C"] = p.C;
        report["D"] = p.D;
        report["boundary"] = describe(p.start);
        report["far"] = p.far ? json(describe(*p.far)) : json();
        report["case"] = profile_case_name(p.kind);
        report["T"] = std::isfinite(p.T) ? json(p.T) : json("INF");
        json rows = json::array();
        for (const auto& s : p.samples) rows.push_back({s.t, s.f, s.df});
        report["samples"] = rows;
        os << report.dump(2) << "\n";
        return kOk;
    }
    if (mode == "roots") {
        csv(os, {"function", "root"});
        if (k.contains("L")) {
            for (double r : h2_nonzero_roots(num(k, "L"))) csv(os, {"h2", fmt_real(r)});
        } else {
            for (double r : h1_nonzero_roots(num(k, "k1"), num(k, "k2"))) csv(os, {"h1", fmt_real(r)});
        }
        return kOk;
    }
    if (mode == "count") {
        const int n = integer(k, "n");
        const double q1 = num(k, "q1"), q2 = num(k, "q2");
        csv(os, {"n", "q1", "q2", "m", "m_numeric"});
        csv(os, {std::to_string(n), fmt_real(q1), fmt_real(q2), std::to_string(count_solitons(n, q1, q2)),
                 std::to_string(count_solitons_numeric(n, q1, q2))});
        return kOk;
    }
    if (mode == "limsol-sweep") {
        const int n = integer(k, "n"), count = integer(k, "count");
        const double lo = num(k, "q_lo"), hi = num(k, "q_hi");
        if (count < 1) throw ConfigError("'kahler.count' must be positive");
        std::vector<double> qs(count), vals(count);
        for (int i = 0; i < count; ++i) qs[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        parallel_for(count, threads_of(cfg), [&](std::size_t i) {
            try {
                vals[i] = limsol_defect(n, qs[i], qs[i], num(cfg, "delta"), num(cfg, "stop_xi"));
            } catch (const std::exception&) {
                vals[i] = std::numeric_limits<double>::quiet_NaN();
            }
        });
        csv(os, {"n", "q", "limsol"});
        for (int i = 0; i < count; ++i) csv(os, {std::to_string(n), fmt_real(qs[i]), fmt_real(vals[i])});
        return kOk;
    }
    throw ConfigError("kahler mode must be profile, roots, count or limsol-sweep");
}

int cmd_oracle(std::ostream& os, std::ostream& err) {
    double worst = 0.0;
    csv(os, {"name", "residual"});
    for (const auto& s : catalog()) {
        const double r = residual(s);
        worst = std::max(worst, r);
        csv(os, {s.name, fmt_real(r)});
    }
    err << "max residual " << fmt_real(worst) << "\n";
    return worst < 1e-9 ? kOk : kFailure;
}

void put_if(json& j, const std::string& key, const CLI::Option* o, double v) {
    if (o->count() > 0) j[key] = v;
}

}  // namespace

json resolve_config(int argc, const char* const* argv, std::ostream& out, std::ostream& err, int* status) {
    *status = kOk;
    CLI::App app{"soliton_cli"};
    app.require_subcommand(0, 1);

    double lambda = 0, delta = 1e-3, stop_xi = -20, tol = 1e-10, horizon = 50, radius = 0.05;
    double alpha = 0, beta = 0, gamma = 0;
    int bolt_n = 0, threads = 1;
    std::string out_path, config_path, fixed, x_axis, y_axis, end, system;
    bool no_permute = false;
    double kn = 1, kq = 1, kC = 0, k1 = 1, k2 = 1, kL = 0, q1 = 1, q2 = 1, q_lo = 1.01, q_hi = 1.5;
    int k_count = 50, samples = 401;
    std::string kstart = "inc", mode;

    auto* o_lambda = app.add_option("--lambda", lambda, "Einstein constant");
    app.add_option("--delta", delta, "series start time");
    app.add_option("--stop-xi", stop_xi, "xi threshold C");
    app.add_option("--tol", tol, "integrator tolerance");
    app.add_option("--horizon", horizon, "integration horizon");
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--config", config_path, "JSON config merged over the flags");
    auto* o_threads = app.add_option("--threads", threads, "worker threads");
    auto* o_fixed = app.add_option("--fixed", fixed, "fixed point a1,a2,a3");
    auto* o_bolt = app.add_option("--bolt", bolt_n, "bolt slope n");
    auto* o_alpha = app.add_option("--alpha", alpha);
    auto* o_beta = app.add_option("--beta", beta);
    auto* o_gamma = app.add_option("--gamma", gamma);
    auto* o_x = app.add_option("--x", x_axis, "axis name:lo:hi:count");
    auto* o_y = app.add_option("--y", y_axis, "axis name:lo:hi:count");
    auto* o_end = app.add_option("--end", end, "fixed or bolt:n");
    app.add_flag("--no-permute", no_permute);
    auto* o_radius = app.add_option("--radius", radius, "refinement radius");
    auto* o_system = app.add_option("--system", system, "su2 or einstein");
    app.add_option("--start", kstart, "vanishing, inc or dec");
    auto* o_kn = app.add_option("--n", kn);
    auto* o_kq = app.add_option("--q", kq);
    auto* o_kC = app.add_option("--C", kC);
    auto* o_k1 = app.add_option("--k1", k1);
    auto* o_k2 = app.add_option("--k2", k2);
    auto* o_kL = app.add_option("--L", kL);
    auto* o_q1 = app.add_option("--q1", q1);
    auto* o_q2 = app.add_option("--q2", q2);
    app.add_option("--q-lo", q_lo);
    app.add_option("--q-hi", q_hi);
    app.add_option("--count", k_count);
    app.add_option("--samples", samples);

    std::vector<CLI::App*> subs;
    for (const char* name : {"integrate", "classify", "scan", "oracle-check"}) subs.push_back(app.add_subcommand(name));
    CLI::App* shoot = app.add_subcommand("shoot");
    shoot->add_option("mode", mode, "sol, heatmap or refine")->required();
    CLI::App* kahler = app.add_subcommand("kahler");
    kahler->add_option("mode", mode, "profile, roots, count or limsol-sweep")->required();
    subs.push_back(shoot);
    subs.push_back(kahler);
    for (auto* s : subs) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        *status = code == 0 ? kOk : kBadConfig;
        return json();
    }

    json cfg;
    for (auto* s : subs)
        if (s->parsed()) cfg["command"] = s->get_name();
    if (!mode.empty()) cfg["mode"] = mode;
    put_if(cfg, "lambda", o_lambda, lambda);
    cfg["delta"] = delta;
    cfg["stop_xi"] = stop_xi;
    cfg["tol"] = tol;
    cfg["horizon"] = horizon;
    if (o_threads->count()) cfg["threads"] = threads;
    if (!out_path.empty()) cfg["out"] = out_path;
    if (o_system->count()) cfg["system"] = system;
    try {
        if (o_fixed->count()) {
            const auto parts = split(fixed, ',');
            if (parts.size() != 3) throw ConfigError("--fixed needs a1,a2,a3");
            cfg["boundary"] = {{"type", "fixed"},
                               {"a", {parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])}}};
        } else if (o_bolt->count()) {
            cfg["boundary"] = {{"type", "bolt"}, {"n", bolt_n}, {"alpha", alpha}, {"beta", beta}, {"gamma", gamma}};
        } else if (o_alpha->count() || o_beta->count() || o_gamma->count()) {
            throw ConfigError("--alpha/--beta/--gamma need --bolt");
        }
        for (auto [key, opt, text] : {std::tuple{"x", o_x, &x_axis}, std::tuple{"y", o_y, &y_axis}}) {
            if (!opt->count()) continue;
            const auto parts = split(*text, ':');
            if (parts.size() != 4) throw ConfigError(std::string("--") + key + " needs name:lo:hi:count");
            const double c = parse_double(parts[3]);
            cfg[key] = {{"name", parts[0]}, {"lo", parse_double(parts[1])}, {"hi", parse_double(parts[2])},
                        {"count", c}};
        }
        if (o_end->count()) {
            const auto parts = split(end, ':');
            if (parts[0] == "fixed" && parts.size() == 1)
                cfg["end"] = {{"kind", "fixed"}, {"permute", !no_permute}};
            else if (parts[0] == "bolt" && parts.size() == 2)
                cfg["end"] = {{"kind", "bolt"}, {"n", parse_double(parts[1])}, {"permute", !no_permute}};
            else
                throw ConfigError("--end must be fixed or bolt:n");
        }
        if (o_radius->count()) cfg["radius"] = radius;
        json k = json::object();
        k["start"] = kstart;
        k["samples"] = samples;
        k["count"] = k_count;
        k["q_lo"] = q_lo;
        k["q_hi"] = q_hi;
        const std::pair<const char*, std::pair<CLI::Option*, double>> kopts[] = {
            {"n", {o_kn, kn}}, {"q", {o_kq, kq}}, {"C", {o_kC, kC}},  {"k1", {o_k1, k1}}, {"k2", {o_k2, k2}},
            {"L", {o_kL, kL}}, {"q1", {o_q1, q1}}, {"q2", {o_q2, q2}}};
        for (const auto& [key, v] : kopts)
            if (v.first->count()) k[key] = v.second;
        cfg["kahler"] = k;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        *status = kBadConfig;
        return json();
    }

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            err << "error: cannot read config '" << config_path << "'\n";
            *status = kIoError;
            return json();
        }
        json file;
        try {
            file = json::parse(in);
        } catch (const json::parse_error& e) {
            err << "error: malformed config: " << e.what() << "\n";
            *status = kBadConfig;
            return json();
        }
        if (!file.is_object()) {
            err << "error: config must be a JSON object\n";
            *status = kBadConfig;
            return json();
        }
        cfg.merge_patch(file);
    }

    if (!cfg.contains("command")) {
        err << "error: no command given\n";
        *status = kBadConfig;
        return json();
    }
    if (!cfg.contains("lambda")) {
        const std::string c = cfg["command"].is_string() ? cfg["command"].get<std::string>() : "";
        cfg["lambda"] = (c == "classify" || c == "scan" || c == "integrate") ? -1.0 : 1.0;
    }
    return cfg;
}

int execute(const json& cfg, std::ostream& out, std::ostream& err) {
    std::ofstream file;
    std::ostream* os = &out;
    try {
        const std::string command = str(cfg, "command");
        if (cfg.contains("out")) {
            const std::string path = str(cfg, "out");
            file.open(path, std::ios::binary);
            if (!file) throw IoError("cannot write '" + path + "'");
            std::ofstream cfg_file(path + ".config.json", std::ios::binary);
            if (!cfg_file) throw IoError("cannot write '" + path + ".config.json'");
            cfg_file << cfg.dump(2) << "\n";
            os = &file;
        }
        int status;
        if (command == "integrate")
            status = cmd_integrate(cfg, *os);
        else if (command == "classify")
            status = cmd_classify(cfg, *os);
        else if (command == "scan")
            status = cmd_scan(cfg, *os);
        else if (command == "shoot")
            status = cmd_shoot(cfg, *os);
        else if (command == "kahler")
            status = cmd_kahler(cfg, *os);
        else if (command == "oracle-check")
            status = cmd_oracle(*os, err);
        else
            throw ConfigError("unknown command '" + command + "'");
        if (file.is_open()) {
            file.flush();
            if (!file) throw IoError("write failed");
        }
        return status;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kBadConfig;
    } catch (const json::exception& e) {
        err << "error: malformed config: " << e.what() << "\n";
        return kBadConfig;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    int status = kOk;
    const json cfg = resolve_config(argc, argv, out, err, &status);
    if (status != kOk || cfg.is_null()) return status;
    return execute(cfg, out, err);
}

}  // namespace soliton::cli
