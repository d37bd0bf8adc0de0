#pragma once

#include <string>
#include <vector>

#include "klab/modmath.hpp"

namespace klab {

// Kl_q(a) = q^{-1/2} * sum over units x mod q of e((a*x + inv(x)) / q),
// q = p^n. For n >= 2 this is real and lies in [-2, 2]; it vanishes exactly
// when a is a quadratic non-residue mod p.
struct KloostermanValue {
    double value = 0.0;
    bool is_zero_class = false; // (a/p) = -1, so the sum vanishes
};

enum class TableSource { DirectOracle, SalieFast };

const char* table_source_name(TableSource s);

struct KloostermanTable {
    PrimePowerModulus modulus;
    TableSource source = TableSource::DirectOracle;
    std::vector<double> values;       // length q, indexed by residue
    std::vector<std::uint8_t> state;  // 0 undefined, 1 defined, 2 defined zero-class

    bool defined(u64 a) const { return state[a % modulus.q] != 0; }
    bool zero_class(u64 a) const { return state[a % modulus.q] == 2; }
    double at(u64 a) const;
    u64 defined_count() const;
};

inline constexpr u64 kDefaultOracleCeiling = 10'000'000;

// The defining sum, evaluated literally with compensated summation; this is
// the oracle every fast path is judged against. Accepts non-unit a (the sum
// is still defined). The imaginary part must cancel (x paired with -x); it is
// asserted below 1e-6 after normalization.
KloostermanValue eval_direct(const PrimePowerModulus& m, u64 a, u64 oracle_ceiling = kDefaultOracleCeiling);

// Closed-form evaluation: 0 when (a/p) = -1, otherwise
// 2 * (s/q) * cos(4*pi*s/q + theta_q) for any root s^2 = a mod q, where (s/q)
// is the Jacobi symbol. theta_q and the sign convention live in
// salie_closed_form() only, and are pinned empirically by the equivalence
// suite against eval_direct.
KloostermanValue eval_salie(const PrimePowerModulus& m, u64 a);

// theta_q: 0 when q = 1 mod 4, pi/2 when q = 3 mod 4.
double salie_phase(const PrimePowerModulus& m);
double salie_closed_form(u64 s, const PrimePowerModulus& m, int jacobi_s);

// Batch table. SalieFast enumerates roots s over the units once (each unit
// square is hit by exactly one s <= (q-1)/2, and the value is
// root-independent); with include_nonunits the q/p residues divisible by p
// are filled by the direct sum, since only the oracle path defines them.
// Output is bit-identical for any thread count.
KloostermanTable build_table(const PrimePowerModulus& m, TableSource source,
                             bool include_nonunits = false, unsigned threads = 1,
                             u64 oracle_ceiling = kDefaultOracleCeiling);

// CSV with header "a,value,is_zero_class" (defined entries only) plus a JSON
// sidecar {p, n, source, count}.
void write_table_csv(const KloostermanTable& table, const std::string& path);
void write_table_sidecar(const KloostermanTable& table, const std::string& path);

} // namespace klab
