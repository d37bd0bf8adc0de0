// Seeded-random property sweeps complementing the exhaustive small-modulus
// loops elsewhere.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "klab/rng.hpp"
#include "klab/shortsum.hpp"
#include "klab/verify.hpp"

using namespace klab;

namespace {
const std::vector<u64> kSmallPrimes = {13, 17, 29, 41, 53, 97};
}

TEST_CASE("property: jacobi periodicity and squares" ) {
    Rng rng(101);
    for (int trial = 0; trial < 2000; ++trial) {
        u64 m = 2 * rng.below(500) + 3; // odd >= 3
        i64 a = i64(rng.below(4 * m)) - i64(2 * m);
        CHECK(jacobi_symbol(a, m) == jacobi_symbol(a + i64(m), m));
        CHECK(jacobi_symbol(a, m) == jacobi_symbol(a - i64(3 * m), m));
        // squares of units always have symbol +1
        u64 x = rng.below(m);
        if (std::gcd(x, m) == 1) CHECK(jacobi_symbol(i64(mul_mod(x, x, m)), m) == 1);
    }
}

TEST_CASE("property: lifted roots square back to their argument") {
    Rng rng(202);
    for (int trial = 0; trial < 400; ++trial) {
        u64 p = kSmallPrimes[rng.below(kSmallPrimes.size())];
        unsigned n = 2 + unsigned(rng.below(3));
        auto m = PrimePowerModulus::make(p, n);
        u64 a = rng.below(m.q);
        if (a % p == 0) continue;
        auto roots = sqrt_mod_prime_power(a, m);
        bool is_square = jacobi_symbol(i64(a % p), p) == 1;
        CHECK(roots.has_value() == is_square);
        if (roots) {
            CHECK(mul_mod(roots->first, roots->first, m.q) == a);
            CHECK((roots->first + roots->second) % m.q == 0);
        }
    }
}

TEST_CASE("property: random B-tuple patterns satisfy their defining congruences") {
    Rng rng(303);
    for (int trial = 0; trial < 60; ++trial) {
        u64 p = kSmallPrimes[rng.below(kSmallPrimes.size())];
        unsigned n = 2 + unsigned(rng.below(2));
        auto m = PrimePowerModulus::make(p, n);
        std::vector<std::pair<u64, unsigned>> entries;
        std::size_t t = 1 + rng.below(3);
        std::vector<u64> classes;
        while (entries.size() < t) {
            u64 tau = rng.below(std::min<u64>(m.q, 4 * p));
            if (std::find(classes.begin(), classes.end(), tau % p) != classes.end()) continue;
            classes.push_back(tau % p);
            entries.emplace_back(tau, 1 + unsigned(rng.below(3)));
        }
        auto mu = ShiftMultiplicity::make(m, entries);
        auto taus = mu.support();

        auto tuples = enumerate_B(mu);
        std::set<u64> seen_c;
        for (const auto& tuple : tuples) {
            CHECK(seen_c.insert(tuple.common_value).second); // one tuple per common value
            for (std::size_t i = 0; i < taus.size(); ++i) {
                u64 ci = (mul_mod(tuple.b[i], tuple.b[i], p) + p - taus[i] % p) % p;
                CHECK(ci == tuple.common_value % p);
                CHECK(ci != 0);
                CHECK(tuple.b[i] >= 1);
                CHECK(tuple.b[i] <= (p - 1) / 2);
            }
        }

        // partition identity for a random nonzero ell
        std::vector<i64> ell(taus.size(), 0);
        while (std::all_of(ell.begin(), ell.end(), [](i64 v) { return v == 0; }))
            for (auto& l : ell) l = i64(rng.below(5)) - 2;
        auto counts = count_N_all(mu, ell);
        u64 total = std::accumulate(counts.begin(), counts.end(), u64(0));
        auto rep = check_counting_bound(mu, ell, 2.0);
        CHECK(total == rep.j_only_count);
        CHECK(rep.within_bound);
    }
}

TEST_CASE("property: translating shifts by multiples of p permutes ensembles") {
    Rng rng(404);
    auto m = PrimePowerModulus::make(29, 2);
    auto table = build_table(m, TableSource::SalieFast, true, 2);
    for (int trial = 0; trial < 12; ++trial) {
        u64 H = 2 + rng.below(6);
        auto base = make_shift_set(m, ShiftSpec::random(H, rng.next_u64()));
        u64 c = m.p * (1 + rng.below(m.p - 1));
        std::vector<u64> moved;
        for (u64 e : base.elements) moved.push_back((e + c) % m.q);
        auto shifted = make_shift_set(m, ShiftSpec::explicit_list(moved));

        auto v1 = ensemble(table, base, 2).values;
        auto v2 = ensemble(table, shifted, 2).values;
        std::sort(v1.begin(), v1.end());
        std::sort(v2.begin(), v2.end());
        for (std::size_t i = 0; i < v1.size(); ++i)
            CHECK(v1[i] == doctest::Approx(v2[i]).epsilon(1e-9));
    }
}

TEST_CASE("property: empirical moments of shifted tables stay bounded by the value range") {
    // |S(x)| <= 2 sqrt(H) pointwise, so M_k <= (2 sqrt(H))^k
    Rng rng(505);
    auto m = PrimePowerModulus::make(41, 2);
    auto table = build_table(m, TableSource::SalieFast, true, 2);
    for (int trial = 0; trial < 8; ++trial) {
        u64 H = 1 + rng.below(10);
        auto I = make_shift_set(m, ShiftSpec::random(H, rng.next_u64()));
        auto ens = ensemble(table, I, 2);
        double bound = std::pow(2.0 * std::sqrt(double(H)), 4.0);
        for (double v : ens.values) CHECK(std::abs(v) <= 2.0 * std::sqrt(double(H)) + 1e-9);
        CHECK(empirical_moment(ens, 4) <= bound + 1e-9);
        CHECK(empirical_moment(ens, 0) == 1.0);
    }
}
