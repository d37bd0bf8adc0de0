#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "klab/errors.hpp"

namespace klab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// All arithmetic in this module is exact for moduli up to 2^62: products go
// through 128-bit intermediates, never through doubles.
inline constexpr u64 kMaxModulus = u64(1) << 62;

// Deterministic Miller-Rabin with the 12-witness set proven exact below
// 3.3*10^24 (covers the whole 2^62 modulus range).
bool is_prime(u64 m);

inline u64 mul_mod(u64 a, u64 b, u64 m) { return u64((u128)a * b % m); }

u64 mod_pow(u64 base, u64 exp, u64 m);

// Inverse modulo an arbitrary m via extended Euclid; throws NotAUnit when
// gcd(x, m) != 1.
u64 inv_mod(u64 x, u64 m);

// Jacobi symbol (a/m) for odd m >= 1, by the standard quadratic-reciprocity
// reduction; accepts any integer a.
int jacobi_symbol(i64 a, u64 m);

// The pair (p, n) with p an odd prime and n >= 2, plus the derived modulus
// q = p^n and phi = q - q/p. make() validates everything and is the single
// entry point.
struct PrimePowerModulus {
    u64 p = 0;
    unsigned n = 0;
    u64 q = 0;
    u64 phi = 0;

    static PrimePowerModulus make(u64 p, unsigned n);

    bool is_unit(u64 a) const { return a % p != 0; }
};

u64 mod_inv(u64 x, const PrimePowerModulus& m);

// Square roots of a modulo an odd prime p. Returns {0,0} for a == 0, the
// ordered pair {s, p-s} when a is a residue, nothing otherwise.
// Tonelli-Shanks with the smallest non-residue as auxiliary, so the returned
// representatives are reproducible.
std::optional<std::pair<u64, u64>> sqrt_mod_prime(u64 a, u64 p);

// Unit square roots modulo p^n by Hensel lifting of sqrt_mod_prime. A unit a
// is a square mod p^n iff (a/p) = 1. Throws NotAUnit when p | a.
std::optional<std::pair<u64, u64>> sqrt_mod_prime_power(u64 a, const PrimePowerModulus& m);

} // namespace klab
