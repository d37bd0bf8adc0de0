#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "klab/io.hpp"
#include "klab/shortsum.hpp"
#include "support.hpp"

using namespace klab;
using klab::testing::cached_table;

TEST_CASE("shift-set construction and separation condition") {
    auto m41 = PrimePowerModulus::make(41, 2);
    auto interval = make_shift_set(m41, ShiftSpec::interval(29));
    REQUIRE(interval.H() == 29);
    for (u64 i = 0; i < 29; ++i) CHECK(interval.elements[i] == i);

    auto m25 = PrimePowerModulus::make(5, 2);
    CHECK_THROWS_AS(make_shift_set(m25, ShiftSpec::explicit_list({0, 5})), Error);
    try {
        make_shift_set(m25, ShiftSpec::explicit_list({0, 5}));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SeparationViolated);
        CHECK(std::string(e.what()).find("0") != std::string::npos);
        CHECK(std::string(e.what()).find("5") != std::string::npos);
    }

    // 9 - 1 = 8 = 1 mod 7: distinctness is mod p, not adjacency.
    auto m49 = PrimePowerModulus::make(7, 2);
    auto ok = make_shift_set(m49, ShiftSpec::explicit_list({1, 9}));
    CHECK(ok.H() == 2);

    CHECK_THROWS_AS(make_shift_set(m25, ShiftSpec::interval(5)), Error);
    try {
        make_shift_set(m25, ShiftSpec::interval(5));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CardinalityTooLarge);
    }
    CHECK_THROWS_AS(make_shift_set(m25, ShiftSpec::interval(0)), Error);
    CHECK_THROWS_AS(make_shift_set(m25, ShiftSpec::explicit_list({1, 1})), Error);
}

TEST_CASE("random shift sets are reproducible and valid") {
    auto m = PrimePowerModulus::make(41, 2);
    auto a = make_shift_set(m, ShiftSpec::random(29, 7));
    auto b = make_shift_set(m, ShiftSpec::random(29, 7));
    auto c = make_shift_set(m, ShiftSpec::random(29, 8));
    CHECK(a.elements == b.elements);
    CHECK(a.elements != c.elements);
    CHECK(a.H() == 29);
    std::set<u64> classes;
    for (u64 e : a.elements) CHECK(classes.insert(e % 41).second);
    CHECK(std::is_sorted(a.elements.begin(), a.elements.end()));
}

TEST_CASE("spec strings round-trip") {
    CHECK(ShiftSpec::parse("interval:29").to_string() == "interval:29");
    CHECK(ShiftSpec::parse("random:29:seed=7").to_string() == "random:29:seed=7");
    CHECK(ShiftSpec::parse("explicit:1,9").to_string() == "explicit:1,9");
    CHECK_THROWS_AS(ShiftSpec::parse("interval"), Error);
    CHECK_THROWS_AS(ShiftSpec::parse("random:29"), Error);
    CHECK_THROWS_AS(ShiftSpec::parse("junk:1"), Error);
}

TEST_CASE("H = 1 ensemble is the table restricted to units") {
    auto m = PrimePowerModulus::make(5, 2);
    auto table = build_table(m, TableSource::DirectOracle, true);
    auto ens = ensemble(table, make_shift_set(m, ShiftSpec::explicit_list({0})));
    REQUIRE(ens.values.size() == m.phi);
    std::size_t j = 0;
    for (u64 x = 1; x < m.q; ++x) {
        if (x % 5 == 0) continue;
        CHECK(ens.values[j++] == doctest::Approx(table.at(x)).epsilon(1e-15));
    }

    // complete first-moment identity: the unit-average of Kl vanishes
    CHECK(std::abs(empirical_moment(ens, 1)) < 1e-9);
    CHECK(empirical_moment(ens, 0) == 1.0);
}

TEST_CASE("ensemble requires a dense table when shifts leave the units") {
    auto m = PrimePowerModulus::make(5, 2);
    auto units_only = build_table(m, TableSource::SalieFast, false);
    auto I = make_shift_set(m, ShiftSpec::interval(2));
    CHECK_THROWS_AS(ensemble(units_only, I), Error);

    auto dense = build_table(m, TableSource::SalieFast, true);
    auto ens = ensemble(dense, I);
    CHECK(ens.values.size() == m.phi);

    auto other = PrimePowerModulus::make(7, 2);
    auto dense7 = build_table(other, TableSource::SalieFast, true);
    CHECK_THROWS_AS(ensemble(dense7, I), Error);
}

TEST_CASE("ensemble values recompute against a direct loop") {
    auto m = PrimePowerModulus::make(7, 2);
    auto table = build_table(m, TableSource::SalieFast, true);
    auto I = make_shift_set(m, ShiftSpec::explicit_list({0, 1, 3}));
    auto ens = ensemble(table, I, 3);
    std::size_t j = 0;
    for (u64 x = 1; x < m.q; ++x) {
        if (x % 7 == 0) continue;
        double expect = 0.0;
        for (u64 tau : I.elements) expect += table.at((x + tau) % m.q);
        expect /= std::sqrt(3.0);
        CHECK(ens.values[j++] == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("translating the shift set by a multiple of p permutes the ensemble") {
    // x -> x + c maps units onto units only when p | c; for unit c the value
    // multisets genuinely differ (centers shift into other residue classes).
    auto m = PrimePowerModulus::make(11, 2);
    auto table = build_table(m, TableSource::SalieFast, true);
    auto base = make_shift_set(m, ShiftSpec::explicit_list({0, 1, 4}));
    auto shifted = make_shift_set(m, ShiftSpec::explicit_list({11, 12, 15}));
    auto e1 = ensemble(table, base);
    auto e2 = ensemble(table, shifted);
    auto v1 = e1.values, v2 = e2.values;
    std::sort(v1.begin(), v1.end());
    std::sort(v2.begin(), v2.end());
    for (std::size_t i = 0; i < v1.size(); ++i) CHECK(v1[i] == doctest::Approx(v2[i]).epsilon(1e-9));
}

TEST_CASE("two moment code paths agree at H = 1") {
    auto m = PrimePowerModulus::make(13, 2);
    const auto& table = cached_table(13, 2, true);
    auto ens = ensemble(table, make_shift_set(m, ShiftSpec::explicit_list({0})));
    double m2_ensemble = empirical_moment(ens, 2);
    double m2_table = 0.0;
    for (u64 a = 1; a < m.q; ++a) {
        if (a % 13 == 0) continue;
        m2_table += table.at(a) * table.at(a);
    }
    m2_table /= double(m.phi);
    CHECK(m2_ensemble == doctest::Approx(m2_table).epsilon(1e-12));
}

TEST_CASE("empirical moments are thread-count invariant") {
    auto m = PrimePowerModulus::make(41, 2);
    const auto& table = cached_table(41, 2, true);
    auto I = make_shift_set(m, ShiftSpec::interval(10));
    auto e1 = ensemble(table, I, 1);
    auto e4 = ensemble(table, I, 4);
    CHECK(e1.values == e4.values);
    for (unsigned k : {1u, 2u, 3u, 4u})
        CHECK(empirical_moment(e1, k, 1) == empirical_moment(e4, k, 4));
}

TEST_CASE("ensemble csv export") {
    auto m = PrimePowerModulus::make(5, 2);
    auto table = build_table(m, TableSource::SalieFast, true);
    auto ens = ensemble(table, make_shift_set(m, ShiftSpec::interval(2)));
    std::string dir = "/tmp/klab_test_ensemble";
    std::filesystem::create_directories(dir);
    write_ensemble_csv(ens, dir + "/e.csv");
    std::string csv = read_text_file(dir + "/e.csv");
    CHECK(csv.rfind("x,value\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 21); // header + 20 units
}
