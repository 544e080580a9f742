#include <doctest.h>

#include <cmath>
#include <sstream>

#include "soliton/atlas.hpp"

using namespace soliton;

namespace {

SolitonParams fixed_alpha0(double d12, double d23) {
    // alpha = 0 at lambda = -1 means a1 + a2 + a3 = 1/3
    const double a3 = (1.0 / 3.0 - d12 - 2.0 * d23) / 3.0;
    const double a2 = a3 + d23;
    return SolitonParams(-1.0, FixedPoint{{a2 + d12, a2, a3}});
}

}  // namespace

TEST_CASE("classify examples") {
    const Classification g = classify(SolitonParams(-1.0, FixedPoint{{0, 0, 0}}));
    CHECK(g.cls == AsymptoticClass::AsymptoticallyConical);

    const Classification h = classify(fixed_alpha0(0.0, 0.0));
    CHECK(h.cls == AsymptoticClass::EinsteinAttractor);
    CHECK(h.defect < 1e-6);

    const Classification k = classify(SolitonParams(-1.0, FixedPoint{{2.0 / 9, 1.0 / 18, 1.0 / 18}}));
    CHECK(k.cls == AsymptoticClass::KahlerCritical);

    CHECK(classify(SolitonParams(-1.0, Bolt{4, 1.0, 1.0, 0.0})).cls == AsymptoticClass::AsymptoticallyConical);
    CHECK(classify(SolitonParams(-1.0, Bolt{2, 0.0, 0.5, 0.0})).cls == AsymptoticClass::EinsteinAttractor);
    CHECK_THROWS(classify(SolitonParams(1.0, FixedPoint{{0, 0, 0}})));
}

TEST_CASE("class names") {
    CHECK(class_name(AsymptoticClass::EinsteinAttractor) == "EINSTEIN");
    CHECK(class_name(AsymptoticClass::AsymptoticallyConical) == "CONICAL");
    CHECK(class_name(AsymptoticClass::KahlerCritical) == "KAHLER");
    CHECK(class_name(AsymptoticClass::DivergentOrIncomplete) == "DIVERGENT");
    CHECK(class_name(AsymptoticClass::Undecided) == "UNDECIDED");
}

TEST_CASE("openness around (1, 1, 0) in the n = 4 set") {
    const double h = 0.01;
    for (auto [da, db, dg] : {std::array{h, 0.0, 0.0}, std::array{-h, 0.0, 0.0}, std::array{0.0, h, 0.0},
                              std::array{0.0, -h, 0.0}, std::array{0.0, 0.0, h}}) {
        const SolitonParams p(-1.0, Bolt{4, 1.0 + da, 1.0 + db, dg});
        CHECK(classify(p).cls == AsymptoticClass::AsymptoticallyConical);
    }
}

TEST_CASE("einstein cells keep the first integral") {
    for (double d12 : {0.0, 0.05, 0.1}) {
        const Classification c = classify(fixed_alpha0(d12, 0.0));
        CHECK(c.defect < 1e-6);
    }
    for (double beta : {0.3, 1.0, 2.5}) CHECK(classify(SolitonParams(-1.0, Bolt{2, 0.0, beta, 0.0})).defect < 1e-6);
}

TEST_CASE("classification is rescaling invariant") {
    const std::vector<SolitonParams> ps{SolitonParams(-1.0, FixedPoint{{0, 0, 0}}), fixed_alpha0(0.0, 0.0),
                                        SolitonParams(-1.0, Bolt{4, 1.0, 1.0, 0.0}),
                                        SolitonParams(-1.0, Bolt{2, 0.0, 0.5, 0.0}),
                                        SolitonParams(-1.0, Bolt{3, 0.05, 3.0, 0.0})};
    for (const auto& p : ps) CHECK(classify(p).cls == classify(rescale(p, 2.0)).cls);
}

TEST_CASE("coordinates") {
    const SolitonParams p = with_coordinate(fixed_alpha0(0.1, 0.05), "alpha", 0.5);
    CHECK(p.alpha() == doctest::Approx(0.5));
    CHECK(coordinate(p, "d12") == doctest::Approx(0.1));
    CHECK(coordinate(p, "d23") == doctest::Approx(0.05));
    const SolitonParams b = with_coordinate(SolitonParams(-1.0, Bolt{4, 1.0, 1.0, 0.0}), "gamma", 0.3);
    CHECK(b.bolt().gamma == 0.3);
    CHECK_THROWS(with_coordinate(b, "d12", 0.1));
    CHECK_THROWS(coordinate(p, "beta"));
}

TEST_CASE("scan validation") {
    const SolitonParams base(-1.0, Bolt{4, 1.0, 1.0, 0.0});
    CHECK_NOTHROW(validate({base, {"alpha", 0.1, 2.0, 3}, {"beta", 0.1, 2.0, 3}}));
    CHECK_THROWS(validate({base, {"alpha", 0.1, 2.0, 1}, {"beta", 0.1, 2.0, 3}}));
    CHECK_THROWS(validate({base, {"alpha", 0.1, 2.0, 3}, {"alpha", 0.1, 2.0, 3}}));
    CHECK_THROWS(validate({base, {"alpha", -0.5, 2.0, 3}, {"beta", 0.1, 2.0, 3}}));
    CHECK_THROWS(validate({base, {"delta", 0.1, 2.0, 3}, {"beta", 0.1, 2.0, 3}}));
    CHECK_THROWS(validate({SolitonParams(1.0, Bolt{4, 1.0, 1.0, 0.0}), {"alpha", 0.1, 2.0, 3}, {"beta", 0.1, 2.0, 3}}));
}

TEST_CASE("scan grid and csv") {
    const ScanRegion r{SolitonParams(-1.0, Bolt{4, 1.0, 1.0, 0.0}), {"alpha", 0.5, 1.5, 3}, {"beta", 0.8, 1.0, 2}};
    const auto cells = scan(r, {}, 2);
    REQUIRE(cells.size() == 6);
    CHECK(cells[0].x == 0.5);
    CHECK(cells[1].y == doctest::Approx(1.0));
    CHECK(cells[2].x == 1.0);
    for (const auto& c : cells) CHECK(c.c.cls == AsymptoticClass::AsymptoticallyConical);
    std::ostringstream os;
    write_scan_csv(os, r, cells);
    const std::string csv = os.str();
    CHECK(csv.rfind("alpha,beta,class,horizon_t,defect\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(csv.find("CONICAL") != std::string::npos);

    std::ostringstream again;
    write_scan_csv(again, r, scan(r, {}, 1));
    CHECK(again.str() == csv);
}

TEST_CASE("n = 2 einstein slice") {
    for (double beta : {0.25, 1.0, 2.0, 3.0})
        CHECK(classify(SolitonParams(-1.0, Bolt{2, 0.0, beta, 0.0})).cls == AsymptoticClass::EinsteinAttractor);
}

TEST_CASE("beta_max boundary") {
    const auto b3 = boundary_trace(3, {0.05});
    REQUIRE(b3[0].ok);
    CHECK(b3[0].beta_max > 1.3);
    CHECK(b3[0].beta_max < 1.7);
    const auto b4 = boundary_trace(4, {1.0});
    REQUIRE(b4[0].ok);
    CHECK(b4[0].beta_max > 1.0);
    CHECK_THROWS(boundary_trace(2, {0.1}));
}

TEST_CASE("u2 einstein constant") {
    for (int n : {3, 4, 5, 10}) {
        const double beta = n / (2.0 * n - 4.0);
        CHECK(std::abs(u2_einstein_constant(n, beta)) < 1e-14);
        CHECK(std::abs(u2_einstein_constant(n, 0.5 * beta)) > 1e-3);
    }
    CHECK(u2_einstein_constant(2, 1.0) > 0.0);
    CHECK(u2_einstein_constant(1, 1.0) > 0.0);
}

TEST_CASE("parallel_for covers every index once") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}
