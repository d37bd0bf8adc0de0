#include "klab/modmath.hpp"

#include <array>

namespace klab {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Usage: return "Usage";
        case ErrorKind::NotAUnit: return "NotAUnit";
        case ErrorKind::OracleScaleExceeded: return "OracleScaleExceeded";
        case ErrorKind::ScaleExceeded: return "ScaleExceeded";
        case ErrorKind::AllocationFailure: return "AllocationFailure";
        case ErrorKind::SeparationViolated: return "SeparationViolated";
        case ErrorKind::CardinalityTooLarge: return "CardinalityTooLarge";
        case ErrorKind::ModulusMismatch: return "ModulusMismatch";
        case ErrorKind::ZeroTuple: return "ZeroTuple";
        case ErrorKind::EmptySample: return "EmptySample";
        case ErrorKind::BadInterval: return "BadInterval";
        case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
        case ErrorKind::HypothesisViolated: return "HypothesisViolated";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

u64 mod_pow(u64 base, u64 exp, u64 m) {
    if (m == 0) fail(ErrorKind::Usage, "mod_pow: modulus must be >= 1");
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime(u64 m) {
    if (m < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (m % p == 0) return m == p;
    }
    u64 d = m - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = mod_pow(a % m, d, m);
        if (x == 1 || x == m - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < r; ++i) {
            x = mul_mod(x, x, m);
            if (x == m - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

u64 inv_mod(u64 x, u64 m) {
    if (m == 0) fail(ErrorKind::Usage, "inv_mod: modulus must be >= 1");
    x %= m;
    i64 old_r = i64(x), r = i64(m);
    i64 old_s = 1, s = 0;
    while (r != 0) {
        i64 quot = old_r / r;
        i64 tmp = old_r - quot * r;
        old_r = r;
        r = tmp;
        tmp = old_s - quot * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) fail(ErrorKind::NotAUnit, "inv_mod: operand not coprime to modulus");
    i64 result = old_s % i64(m);
    if (result < 0) result += i64(m);
    return u64(result);
}

int jacobi_symbol(i64 a, u64 m) {
    if (m == 0 || m % 2 == 0) fail(ErrorKind::Usage, "jacobi_symbol: modulus must be odd and positive");
    i64 mm = i64(m);
    u64 aa = u64(((a % mm) + mm) % mm);
    int t = 1;
    while (aa != 0) {
        while (aa % 2 == 0) {
            aa /= 2;
            u64 r = m % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(aa, m);
        if (aa % 4 == 3 && m % 4 == 3) t = -t;
        aa %= m;
    }
    return (m == 1) ? t : 0;
}

PrimePowerModulus PrimePowerModulus::make(u64 p, unsigned n) {
    if (p < 3 || p % 2 == 0) fail(ErrorKind::Usage, "modulus: p must be an odd prime >= 3");
    if (!is_prime(p)) fail(ErrorKind::Usage, "modulus: p = " + std::to_string(p) + " is not prime");
    if (n < 2) fail(ErrorKind::Usage, "modulus: exponent n must be >= 2");
    u64 q = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (q > kMaxModulus / p) fail(ErrorKind::Usage, "modulus: p^n exceeds 2^62");
        q *= p;
    }
    PrimePowerModulus m;
    m.p = p;
    m.n = n;
    m.q = q;
    m.phi = q - q / p;
    return m;
}

u64 mod_inv(u64 x, const PrimePowerModulus& m) {
    if (x % m.p == 0) fail(ErrorKind::NotAUnit, "mod_inv: p divides operand");
    return inv_mod(x, m.q);
}

std::optional<std::pair<u64, u64>> sqrt_mod_prime(u64 a, u64 p) {
    a %= p;
    if (a == 0) return std::make_pair(u64(0), u64(0));
    if (jacobi_symbol(i64(a), p) != 1) return std::nullopt;

    u64 s;
    if (p % 4 == 3) {
        s = mod_pow(a, (p + 1) / 4, p);
    } else {
        // Tonelli-Shanks. The auxiliary non-residue is the smallest one so
        // that results are reproducible across runs.
        u64 q = p - 1;
        unsigned e = 0;
        while ((q & 1) == 0) {
            q >>= 1;
            ++e;
        }
        u64 z = 2;
        while (jacobi_symbol(i64(z), p) != -1) ++z;
        u64 c = mod_pow(z, q, p);
        s = mod_pow(a, (q + 1) / 2, p);
        u64 t = mod_pow(a, q, p);
        unsigned m_exp = e;
        while (t != 1) {
            u64 tt = t;
            unsigned i = 0;
            while (tt != 1) {
                tt = mul_mod(tt, tt, p);
                ++i;
            }
            u64 b = c;
            for (unsigned j = 0; j + i + 1 < m_exp; ++j) b = mul_mod(b, b, p);
            s = mul_mod(s, b, p);
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            m_exp = i;
        }
    }
    u64 other = p - s;
    if (s > other) std::swap(s, other);
    return std::make_pair(s, other);
}

std::optional<std::pair<u64, u64>> sqrt_mod_prime_power(u64 a, const PrimePowerModulus& m) {
    a %= m.q;
    if (a % m.p == 0) fail(ErrorKind::NotAUnit, "sqrt_mod_prime_power: p divides operand");
    auto base = sqrt_mod_prime(a % m.p, m.p);
    if (!base) return std::nullopt;

    // Newton lift s -> s - (s^2 - a) / (2s), doubling the exponent each step.
    u64 s = base->first;
    unsigned k = 1;
    while (k < m.n) {
        unsigned k2 = std::min(2 * k, m.n);
        u64 e2 = 1;
        for (unsigned i = 0; i < k2; ++i) e2 *= m.p;
        u64 diff = u64(((u128)s * s + (e2 - a % e2)) % e2);
        u64 inv2s = inv_mod((2 * s) % e2, e2);
        u64 corr = mul_mod(diff, inv2s, e2);
        s = (s + e2 - corr) % e2;
        k = k2;
    }
    u64 other = m.q - s;
    if (s > other) std::swap(s, other);
    return std::make_pair(s, other);
}

} // namespace klab
