#pragma once

#include <string>
#include <vector>

#include "klab/kloosterman.hpp"

namespace klab {

// Sparse multiplicity tuple mu: tau -> mu(tau) >= 1, with derived supports
// T (in Z/qZ) and Tbar (reductions mod p).
struct ShiftMultiplicity {
    PrimePowerModulus modulus;
    std::vector<std::pair<u64, unsigned>> mu; // sorted by tau, mu >= 1

    static ShiftMultiplicity make(const PrimePowerModulus& m,
                                  std::vector<std::pair<u64, unsigned>> entries);
    // "0:2,1:2"
    static ShiftMultiplicity parse(const PrimePowerModulus& m, const std::string& text);

    std::vector<u64> support() const;       // T, sorted
    std::vector<u64> support_mod_p() const; // Tbar, sorted distinct
    unsigned total() const;
    std::string to_string() const;
};

// Hypothesis p > max(M, 2n-5) that gates every asymptotic comparison.
bool asymptotic_hypothesis_holds(const ShiftMultiplicity& mu, unsigned M);

// S_q(mu) = (1/phi) * sum over units a of prod_tau Kl(a+tau)^mu(tau).
double complete_sum_moment(const KloostermanTable& table, const ShiftMultiplicity& mu,
                           unsigned threads = 1);

// |A_q(mu)|: units a with a+tau a unit square mod q for every tau in T.
// Exhaustive loop over all units; this is the oracle side.
u64 brute_count_A(const ShiftMultiplicity& mu, u64 ceiling = kDefaultOracleCeiling);

// prod_tau delta(mu(tau) even) * C(mu(tau), mu(tau)/2) * countA / phi.
double main_term(const ShiftMultiplicity& mu, u64 countA);

struct CardinalityReport {
    u64 count = 0;
    double predicted = 0.0;        // phi / 2^|Tbar|
    double normalized_deviation = 0.0; // |count 2^|Tbar| / phi - 1| * sqrt(p) / (2^|Tbar| |Tbar|)
    unsigned tbar_size = 0;
    bool tbar_smaller_than_t = false;
};

CardinalityReport cardinality_check(const ShiftMultiplicity& mu, u64 ceiling = kDefaultOracleCeiling);

// Tuples (b_tau), b_tau in {1, ..., (p-1)/2}, with b_tau^2 - tau constant
// and nonzero mod p. Enumerated over the common value c rather than the
// naive product loop, so the cost is O(p |T|).
struct BTuple {
    std::vector<u64> b; // parallel to support()
    u64 common_value = 0; // c = b_tau^2 - tau mod p
};

std::vector<BTuple> enumerate_B(const ShiftMultiplicity& mu);

// N(mu, ell; w): B-tuples whose inverse power sums m(j,j) = sum_tau
// ell_tau * inv(b_tau)^{2j-1} mod p satisfy m(1,1) = w and m(j,j) = 0 for
// 2 <= j <= n-1. ell is indexed parallel to support().
u64 count_N(const ShiftMultiplicity& mu, const std::vector<i64>& ell, u64 w);
std::vector<u64> count_N_all(const ShiftMultiplicity& mu, const std::vector<i64>& ell);

struct CountingBoundReport {
    u64 n_max = 0;      // max over w of N(mu, ell; w)
    double bound = 0.0; // C_N * |T| * 2^|T|
    bool within_bound = false;
    u64 sum_over_w = 0;   // must equal j_only_count exactly
    u64 j_only_count = 0; // B-tuples meeting the j >= 2 congruences alone
};

CountingBoundReport check_counting_bound(const ShiftMultiplicity& mu, const std::vector<i64>& ell,
                                         double c_n);

} // namespace klab
