#include <doctest.h>

#include <cmath>

#include "klab/theorems.hpp"

using namespace klab;

TEST_CASE("beta_n table and crossover") {
    for (unsigned n = 2; n <= 5; ++n) {
        CHECK(beta_n_rational(n) == Rational(1, 2));
        CHECK(BetaN::make(n).beta == 0.5);
        CHECK(BetaN::make(n).alpha == 1.0);
    }
    CHECK(beta_n_rational(5) == Rational(1, 2)); // 4*4/32 exactly
    CHECK(beta_n_rational(6) == Rational(5, 16));
    CHECK(BetaN::make(6).beta == doctest::Approx(0.3125));
    CHECK(BetaN::make(6).alpha == 0.0);

    // 4(n-1)/2^n >= 1/2 iff 2 <= n <= 5
    for (unsigned n = 2; n <= 12; ++n) {
        Rational formula(BigInt(4) * (n - 1), BigInt(1) << n);
        CHECK((formula >= Rational(1, 2)) == (n <= 5));
    }
    CHECK_THROWS_AS(BetaN::make(1), Error);
}

TEST_CASE("hypothesis guards reject bad grid points") {
    FrozenConstants c;
    // |I| >= p
    CHECK_THROWS_AS(check_theorem_A({{5, 2, ShiftSpec::interval(5)}}, c, 1), Error);
    try {
        check_theorem_A({{5, 2, ShiftSpec::interval(5)}}, c, 1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HypothesisViolated);
    }
    // p <= max(k_max, 2n-5)
    CHECK_THROWS_AS(check_moment_expansion({{5, 2, ShiftSpec::interval(2)}}, 6, c, 1), Error);
    try {
        check_moment_expansion({{5, 2, ShiftSpec::interval(2)}}, 6, c, 1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HypothesisViolated);
        CHECK(std::string(e.what()).find("k_max") != std::string::npos);
    }
    // separation condition violated inside the grid
    CHECK_THROWS_AS(check_theorem_A({{5, 2, ShiftSpec::explicit_list({0, 5})}}, c, 1), Error);
    // large n makes 2n-5 bite: p = 7 <= 2*7-5 = 9
    CHECK_THROWS_AS(check_theorem_A({{7, 7, ShiftSpec::interval(2)}}, c, 1), Error);
}

TEST_CASE("moment expansion report on a small grid") {
    FrozenConstants c;
    std::vector<GridPointSpec> grid = {{31, 2, ShiftSpec::interval(4)}, {61, 2, ShiftSpec::interval(4)}};
    auto rep = check_moment_expansion(grid, 4, c, 2);
    REQUIRE(rep.points.size() == 2);
    for (const auto& pt : rep.points) {
        CHECK(pt.empirical[0] == 1.0);
        CHECK(pt.exact[0] == 1.0);
        CHECK(pt.deviation[0] == 0.0);
        CHECK(pt.exact[2] == doctest::Approx(1.0));
        for (unsigned k = 0; k <= 4; ++k) CHECK(pt.deviation[k] >= 0.0);
    }
    CHECK(rep.trend_ok.size() == 2); // k = 2, 4
}

TEST_CASE("theorem A degenerate H = 1 point is flagged, not failed") {
    FrozenConstants c;
    auto rep = check_theorem_A({{31, 2, ShiftSpec::interval(1)}, {61, 2, ShiftSpec::interval(6)}}, c, 2);
    REQUIRE(rep.points.size() == 2);
    CHECK(!rep.points[0].in_clt_regime);
    // half the mass is an atom at 0, so F jumps from ~1/4 to ~3/4 there and
    // the KS distance sits near 1/4
    CHECK(rep.points[0].ks > 0.2);
    CHECK(rep.points[1].in_clt_regime);
    // the trend only ranges over CLT-regime points, so the H=1 KS is ignored
    CHECK(rep.final_ks == rep.points[1].ks);
}

TEST_CASE("theorem B error shape arithmetic") {
    FrozenConstants c;
    GridPointSpec point{101, 2, ShiftSpec::interval(10)};
    auto rep = check_theorem_B(point, {{-1.0, 1.0}, {-8.0, 8.0}}, c, 2);
    REQUIRE(rep.intervals.size() == 2);
    const auto& cell = rep.intervals[0];
    double expected_shape = std::max(0.1, std::pow(std::log(10.0) / std::log(101.0), 0.75)) +
                            std::pow(101.0, -0.5) + 2.0 / std::sqrt(10.0);
    CHECK(cell.error_shape == doctest::Approx(expected_shape).epsilon(1e-12));
    CHECK(cell.bound == doctest::Approx(c.theorem_b_factor * expected_shape).epsilon(1e-12));
    CHECK(rep.beta_n == 0.5);

    // [-8, 8] carries almost all the mass
    CHECK(rep.intervals[1].p_emp == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.intervals[1].gauss_mass == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(check_theorem_B(point, {{1.0, -1.0}}, c, 1), Error);
}

TEST_CASE("berry-esseen model check") {
    FrozenConstants c;
    auto rep = check_berry_esseen({4, 16}, {{-1.0, 1.0}, {0.0, 2.0}}, 20000, 42, c, 2);
    REQUIRE(rep.cells.size() == 4);
    for (const auto& cell : rep.cells) {
        CHECK(cell.p_mc >= 0.0);
        CHECK(cell.p_mc <= 1.0);
        CHECK(cell.std_error > 0.0);
        CHECK(cell.bound > 0.0);
    }
    // deterministic given the seed
    auto rep2 = check_berry_esseen({4, 16}, {{-1.0, 1.0}, {0.0, 2.0}}, 20000, 42, c, 1);
    for (std::size_t i = 0; i < rep.cells.size(); ++i) CHECK(rep.cells[i].p_mc == rep2.cells[i].p_mc);

    // H = 1 shows the atom: P(S_1 in [-1/2, 1/2]) = 1/2 + arcsin(1/4)/pi
    auto rep1 = check_berry_esseen({1}, {{-0.5, 0.5}}, 200000, 7, c, 2);
    double model_mass = 0.5 + std::asin(0.25) / std::acos(-1.0);
    CHECK(rep1.cells[0].p_mc == doctest::Approx(model_mass).epsilon(0.01));
    CHECK(rep1.cells[0].deviation > 0.15); // far from the Gaussian mass, as expected at H=1
}

TEST_CASE("verdicts recompute bit-exactly from serialized reports") {
    FrozenConstants c;
    auto rep = check_theorem_A({{31, 2, ShiftSpec::interval(4)}, {61, 2, ShiftSpec::interval(6)}}, c, 2);
    nlohmann::json j = to_json(rep);

    // rebuild the verdict from the serialized numbers only
    bool decreasing = true;
    double prev = -1.0, final_ks = 1.0;
    for (const auto& pt : j["points"]) {
        if (!pt["in_clt_regime"].get<bool>()) continue;
        double ks = pt["ks"].get<double>();
        if (prev >= 0.0 && ks >= prev) decreasing = false;
        prev = ks;
        final_ks = ks;
    }
    bool verdict = decreasing && final_ks <= c.theorem_a_final_ks;
    CHECK(decreasing == j["ks_decreasing"].get<bool>());
    CHECK(final_ks == j["final_ks"].get<double>());
    CHECK(verdict == j["verdict"].get<bool>());
}
