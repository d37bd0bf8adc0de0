#include "klab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "klab/parallel.hpp"
#include "klab/rational.hpp"

namespace klab {

ShiftMultiplicity ShiftMultiplicity::make(const PrimePowerModulus& m,
                                          std::vector<std::pair<u64, unsigned>> entries) {
    if (entries.empty()) fail(ErrorKind::Usage, "multiplicity tuple must have non-empty support");
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first >= m.q) fail(ErrorKind::Usage, "shift out of range");
        if (entries[i].second == 0) fail(ErrorKind::Usage, "multiplicities must be >= 1");
        if (i > 0 && entries[i].first == entries[i - 1].first)
            fail(ErrorKind::Usage, "duplicate shift in multiplicity tuple");
    }
    ShiftMultiplicity out;
    out.modulus = m;
    out.mu = std::move(entries);
    return out;
}

ShiftMultiplicity ShiftMultiplicity::parse(const PrimePowerModulus& m, const std::string& text) {
    std::vector<std::pair<u64, unsigned>> entries;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) fail(ErrorKind::Usage, "expected tau:mu pairs, got '" + text + "'");
        try {
            u64 tau = std::stoull(item.substr(0, colon));
            unsigned mult = unsigned(std::stoul(item.substr(colon + 1)));
            entries.emplace_back(tau, mult);
        } catch (const std::exception&) {
            fail(ErrorKind::Usage, "cannot parse multiplicity item '" + item + "'");
        }
    }
    return make(m, std::move(entries));
}

std::vector<u64> ShiftMultiplicity::support() const {
    std::vector<u64> t;
    t.reserve(mu.size());
    for (const auto& [tau, m] : mu) t.push_back(tau);
    return t;
}

std::vector<u64> ShiftMultiplicity::support_mod_p() const {
    std::vector<u64> t;
    t.reserve(mu.size());
    for (const auto& [tau, m] : mu) t.push_back(tau % modulus.p);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

unsigned ShiftMultiplicity::total() const {
    unsigned s = 0;
    for (const auto& [tau, m] : mu) s += m;
    return s;
}

std::string ShiftMultiplicity::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (i) out << ',';
        out << mu[i].first << ':' << mu[i].second;
    }
    return out.str();
}

bool asymptotic_hypothesis_holds(const ShiftMultiplicity& mu, unsigned M) {
    u64 bound = std::max<u64>(M, 2 * u64(mu.modulus.n) >= 5 ? 2 * u64(mu.modulus.n) - 5 : 0);
    return mu.total() <= M && mu.modulus.p > bound;
}

double complete_sum_moment(const KloostermanTable& table, const ShiftMultiplicity& mu,
                           unsigned threads) {
    if (table.modulus.q != mu.modulus.q)
        fail(ErrorKind::ModulusMismatch, "complete_sum_moment: table and tuple moduli differ");
    const PrimePowerModulus& m = table.modulus;

    std::vector<u64> centers;
    centers.reserve(m.phi);
    for (u64 a = 1; a < m.q; ++a)
        if (a % m.p != 0) centers.push_back(a);

    double total = deterministic_sum(centers.size(), threads, [&](std::size_t idx) {
        u64 a = centers[idx];
        double prod = 1.0;
        for (const auto& [tau, mult] : mu.mu) {
            u64 r = a + tau;
            if (r >= m.q) r -= m.q;
            double v = table.at(r);
            for (unsigned e = 0; e < mult; ++e) prod *= v;
        }
        return prod;
    });
    return total / double(m.phi);
}

u64 brute_count_A(const ShiftMultiplicity& mu, u64 ceiling) {
    const PrimePowerModulus& m = mu.modulus;
    if (m.q > ceiling)
        fail(ErrorKind::OracleScaleExceeded, "brute_count_A: q = " + std::to_string(m.q) + " above ceiling");

    // Unit square mod p^n <=> unit with quadratic-residue reduction mod p.
    std::vector<std::uint8_t> sq(m.p, 0);
    for (u64 s = 1; s < m.p; ++s) sq[mul_mod(s, s, m.p)] = 1;

    std::vector<u64> taus = mu.support();
    u64 count = 0;
    for (u64 a = 1; a < m.q; ++a) {
        if (a % m.p == 0) continue;
        bool ok = true;
        for (u64 tau : taus) {
            u64 r = a + tau;
            if (r >= m.q) r -= m.q;
            u64 rp = r % m.p;
            if (rp == 0 || !sq[rp]) {
                ok = false;
                break;
            }
        }
        count += ok;
    }
    return count;
}

double main_term(const ShiftMultiplicity& mu, u64 countA) {
    double coeff = 1.0;
    for (const auto& [tau, mult] : mu.mu) {
        if (mult % 2 == 1) return 0.0;
        coeff *= to_double(Rational(big_binomial(mult, mult / 2)));
    }
    return coeff * double(countA) / double(mu.modulus.phi);
}

CardinalityReport cardinality_check(const ShiftMultiplicity& mu, u64 ceiling) {
    CardinalityReport r;
    r.count = brute_count_A(mu, ceiling);
    auto tbar = mu.support_mod_p();
    r.tbar_size = unsigned(tbar.size());
    r.tbar_smaller_than_t = tbar.size() < mu.mu.size();
    double two_tbar = std::ldexp(1.0, int(r.tbar_size));
    r.predicted = double(mu.modulus.phi) / two_tbar;
    double rel = std::abs(double(r.count) * two_tbar / double(mu.modulus.phi) - 1.0);
    r.normalized_deviation = rel * std::sqrt(double(mu.modulus.p)) / (two_tbar * double(r.tbar_size));
    return r;
}

std::vector<BTuple> enumerate_B(const ShiftMultiplicity& mu) {
    const PrimePowerModulus& m = mu.modulus;
    std::vector<u64> taus = mu.support();
    if (taus.size() > 4) fail(ErrorKind::ScaleExceeded, "enumerate_B: |T| > 4");
    if (m.p > 500) fail(ErrorKind::ScaleExceeded, "enumerate_B: p > 500");

    // Smallest half-range root of each residue, 0 when not a nonzero square.
    std::vector<u64> half_root(m.p, 0);
    for (u64 s = 1; s <= (m.p - 1) / 2; ++s) half_root[mul_mod(s, s, m.p)] = s;

    std::vector<BTuple> out;
    for (u64 c = 1; c < m.p; ++c) {
        BTuple tuple;
        tuple.common_value = c;
        tuple.b.reserve(taus.size());
        bool ok = true;
        for (u64 tau : taus) {
            u64 r = (c + tau) % m.p;
            if (r == 0 || half_root[r] == 0) {
                ok = false;
                break;
            }
            tuple.b.push_back(half_root[r]);
        }
        if (ok) out.push_back(std::move(tuple));
    }
    return out;
}

namespace {

// Shared core: counts per residue w, plus the count of tuples passing only
// the j >= 2 congruences.
struct NCounts {
    std::vector<u64> by_w;
    u64 j_only = 0;
};

NCounts count_n_impl(const ShiftMultiplicity& mu, const std::vector<i64>& ell) {
    const PrimePowerModulus& m = mu.modulus;
    std::vector<u64> taus = mu.support();
    if (ell.size() != taus.size())
        fail(ErrorKind::Usage, "count_N: ell must have one entry per element of the support");
    bool all_zero = true;
    for (i64 l : ell) {
        if (l != 0) all_zero = false;
        if (std::llabs(l) >= i64(m.p)) fail(ErrorKind::HypothesisViolated, "count_N: requires |ell_tau| < p");
    }
    if (all_zero) fail(ErrorKind::ZeroTuple, "count_N: ell is the zero tuple");
    if (mu.support_mod_p().size() != taus.size())
        fail(ErrorKind::HypothesisViolated, "count_N: requires |T(mu)| = |Tbar(mu)|");

    std::vector<u64> ell_mod(ell.size());
    for (std::size_t i = 0; i < ell.size(); ++i) ell_mod[i] = u64(((ell[i] % i64(m.p)) + i64(m.p)) % i64(m.p));

    NCounts counts;
    counts.by_w.assign(m.p, 0);
    for (const BTuple& tuple : enumerate_B(mu)) {
        std::vector<u64> inv_b(tuple.b.size());
        for (std::size_t i = 0; i < tuple.b.size(); ++i) inv_b[i] = inv_mod(tuple.b[i], m.p);

        bool higher_ok = true;
        for (unsigned j = 2; j + 1 <= m.n; ++j) {
            u64 s = 0;
            for (std::size_t i = 0; i < inv_b.size(); ++i) {
                u64 pw = mod_pow(inv_b[i], 2 * j - 1, m.p);
                s = (s + mul_mod(ell_mod[i], pw, m.p)) % m.p;
            }
            if (s != 0) {
                higher_ok = false;
                break;
            }
        }
        if (!higher_ok) continue;
        counts.j_only += 1;
        u64 w = 0;
        for (std::size_t i = 0; i < inv_b.size(); ++i) w = (w + mul_mod(ell_mod[i], inv_b[i], m.p)) % m.p;
        counts.by_w[w] += 1;
    }
    return counts;
}

} // namespace

std::vector<u64> count_N_all(const ShiftMultiplicity& mu, const std::vector<i64>& ell) {
    return count_n_impl(mu, ell).by_w;
}

u64 count_N(const ShiftMultiplicity& mu, const std::vector<i64>& ell, u64 w) {
    return count_n_impl(mu, ell).by_w[w % mu.modulus.p];
}

CountingBoundReport check_counting_bound(const ShiftMultiplicity& mu, const std::vector<i64>& ell,
                                         double c_n) {
    NCounts counts = count_n_impl(mu, ell);
    CountingBoundReport r;
    for (u64 c : counts.by_w) {
        r.n_max = std::max(r.n_max, c);
        r.sum_over_w += c;
    }
    r.j_only_count = counts.j_only;
    double t = double(mu.mu.size());
    r.bound = c_n * t * std::ldexp(1.0, int(mu.mu.size()));
    r.within_bound = double(r.n_max) <= r.bound;
    return r;
}

} // namespace klab
