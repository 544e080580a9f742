#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "cli_app.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int status;
    std::string out, err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "soliton_cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = soliton::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "soliton_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("oracle-check") {
    const Result r = cli({"oracle-check"});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("name,residual\n", 0) == 0);
    CHECK(r.err.find("max residual") != std::string::npos);
}

TEST_CASE("integrate gaussian expander") {
    const Result r = cli({"integrate", "--fixed", "0,0,0", "--horizon", "2"});
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("t,xi,L1,L2,L3,R1,R2,R3,f1,f2,f3,df1,df2,df3,u_prime\n", 0) == 0);
    const std::string last = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
    CHECK(last.rfind("2,", 0) == 0);
    CHECK(std::abs(std::stod(last.substr(2)) - 3.5) < 1e-8);
}

TEST_CASE("scan header") {
    const Result r = cli({"scan", "--bolt", "4", "--beta", "1", "--x", "alpha:0.5:1.5:2", "--y", "beta:0.8:1:2"});
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("alpha,beta,class,horizon_t,defect\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
}

TEST_CASE("classify and shoot") {
    const Result c = cli({"classify", "--fixed", "0,0,0"});
    REQUIRE(c.status == 0);
    CHECK(c.out.find("CONICAL") != std::string::npos);

    const Result s = cli({"shoot", "sol", "--fixed", "-0.1111111111111111,-0.1111111111111111,-0.1111111111111111",
                          "--end", "fixed"});
    REQUIRE(s.status == 0);
    CHECK(s.out.rfind("sol,closed,t0,T,perm\n", 0) == 0);

    const Result inf = cli({"shoot", "sol", "--lambda", "0", "--fixed", "0,0,0", "--end", "fixed", "--horizon", "5"});
    REQUIRE(inf.status == 0);
    CHECK(inf.out.find("INF,0") != std::string::npos);
}

TEST_CASE("kahler modes") {
    const Result roots = cli({"kahler", "roots", "--k1", "1", "--k2", "1"});
    REQUIRE(roots.status == 0);
    CHECK(roots.out.find("h1,-0.5276195198") != std::string::npos);

    const Result count = cli({"kahler", "count", "--n", "2", "--q1", "2", "--q2", "3"});
    REQUIRE(count.status == 0);
    CHECK(count.out.find("\n2,2,3,2,2\n") != std::string::npos);

    const Result prof = cli({"kahler", "profile", "--start", "vanishing", "--C", "0", "--samples", "11"});
    REQUIRE(prof.status == 0);
    const auto j = nlohmann::json::parse(prof.out);
    CHECK(j["case"] == "compact");
    CHECK(j["samples"].size() == 11);
    CHECK(j["C"] == 0.0);

    const Result sweep = cli({"kahler", "limsol-sweep", "--n", "2", "--q-lo", "1.01", "--q-hi", "1.5", "--count", "3"});
    REQUIRE(sweep.status == 0);
    CHECK(sweep.out.rfind("n,q,limsol\n", 0) == 0);
    CHECK(std::count(sweep.out.begin(), sweep.out.end(), '\n') == 4);
}

TEST_CASE("bad configuration gives status 2") {
    CHECK(cli({"integrate"}).status == 2);
    CHECK(cli({"integrate", "--fixed", "1,2"}).status == 2);
    CHECK(cli({"integrate", "--fixed", "a,b,c"}).status == 2);
    CHECK(cli({"frobnicate"}).status == 2);
    CHECK(cli({"shoot", "sol", "--fixed", "0,0,0", "--end", "ring"}).status == 2);
    CHECK(cli({"scan", "--bolt", "4", "--x", "alpha:-1:1:2", "--y", "beta:0.8:1:2"}).status == 2);
    CHECK(cli({"integrate", "--bolt", "3", "--beta", "1", "--gamma", "0.2"}).status == 2);

    const fs::path bad = scratch("bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK(cli({"integrate", "--config", bad.string()}).status == 2);
    std::ofstream(bad) << "[1, 2]";
    CHECK(cli({"integrate", "--config", bad.string()}).status == 2);
}

TEST_CASE("io failures give status 3") {
    CHECK(cli({"integrate", "--fixed", "0,0,0", "--config", "/nonexistent/dir/cfg.json"}).status == 3);
    CHECK(cli({"oracle-check", "--out", "/nonexistent/dir/out.csv"}).status == 3);
}

TEST_CASE("config files override flags and runs are reproducible") {
    const fs::path cfg = scratch("scan.json");
    std::ofstream(cfg) << R"({"command": "scan", "lambda": -1,
        "boundary": {"type": "bolt", "n": 4, "alpha": 1, "beta": 1, "gamma": 0},
        "x": {"name": "alpha", "lo": 0.5, "hi": 1.5, "count": 3},
        "y": {"name": "beta", "lo": 0.8, "hi": 1.0, "count": 2}, "horizon": 40})";
    const fs::path a = scratch("a.csv"), b = scratch("b.csv");
    REQUIRE(cli({"integrate", "--horizon", "10", "--config", cfg.string(), "--out", a.string()}).status == 0);
    REQUIRE(cli({"--config", cfg.string(), "--out", b.string(), "--threads", "3"}).status == 0);
    const std::string body = read(a);
    CHECK(body == read(b));
    CHECK(body.rfind("alpha,beta,class", 0) == 0);
    CHECK(body.find('\r') == std::string::npos);
    const auto resolved = nlohmann::json::parse(read(a.string() + ".config.json"));
    CHECK(resolved["horizon"] == 40);
    CHECK(resolved["command"] == "scan");
}
