#include "klab/kloosterman.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <sstream>

#include "klab/io.hpp"
#include "klab/parallel.hpp"

namespace klab {

namespace {

constexpr double kPi = std::numbers::pi;

// Shared precomputation for direct summation over one modulus: inverse table
// (0 at non-units) and the q-th roots of unity, interleaved cos/sin so each
// term touches one cache line.
struct DirectContext {
    const PrimePowerModulus m;
    std::vector<std::uint32_t> invs;
    std::vector<double> unit_circle; // [2k] = cos(2 pi k / q), [2k+1] = sin

    explicit DirectContext(const PrimePowerModulus& mod) : m(mod) {
        if (m.q > (u64(1) << 32)) fail(ErrorKind::OracleScaleExceeded, "direct context: modulus too large");
        invs.assign(m.q, 0);
        unit_circle.resize(2 * m.q);
        for (u64 x = 1; x < m.q; ++x) {
            if (x % m.p == 0) continue;
            invs[x] = std::uint32_t(inv_mod(x, m.q));
        }
        const double step = 2.0 * kPi / double(m.q);
        for (u64 k = 0; k < m.q; ++k) {
            unit_circle[2 * k] = std::cos(step * double(k));
            unit_circle[2 * k + 1] = std::sin(step * double(k));
        }
    }

    // Real and (should-cancel) imaginary part of sum_x e((a x + inv x)/q).
    std::pair<double, double> raw_sum(u64 a) const {
        a %= m.q;
        KahanSum re, im;
        u64 ax = 0; // a*x mod q, advanced incrementally
        u64 xmodp = 0;
        for (u64 x = 1; x < m.q; ++x) {
            ax += a;
            if (ax >= m.q) ax -= m.q;
            if (++xmodp == m.p) {
                xmodp = 0;
                continue;
            }
            u64 idx = ax + invs[x];
            if (idx >= m.q) idx -= m.q;
            re.add(unit_circle[2 * idx]);
            im.add(unit_circle[2 * idx + 1]);
        }
        return {re.value(), im.value()};
    }

    KloostermanValue eval(u64 a) const {
        auto [re, im] = raw_sum(a);
        double norm = std::pow(double(m.p), double(m.n) / 2.0);
        double value = re / norm;
        double residual = std::abs(im / norm);
        if (residual >= 1e-6)
            fail(ErrorKind::Usage, "eval_direct: imaginary part failed to cancel (" + fmt12(residual) + ")");
        if (std::abs(value) > 2.0 + 1e-6)
            fail(ErrorKind::Usage, "eval_direct: |value| > 2, convention bug");
        KloostermanValue out;
        out.value = value;
        out.is_zero_class = (a % m.p != 0) && jacobi_symbol(i64(a % m.p), m.p) == -1;
        return out;
    }
};

} // namespace

const char* table_source_name(TableSource s) {
    return s == TableSource::DirectOracle ? "direct" : "salie";
}

double KloostermanTable::at(u64 a) const {
    a %= modulus.q;
    if (state[a] == 0)
        fail(ErrorKind::Usage, "table: entry " + std::to_string(a) + " is undefined (non-units not requested?)");
    return values[a];
}

u64 KloostermanTable::defined_count() const {
    u64 n = 0;
    for (auto s : state) n += (s != 0);
    return n;
}

KloostermanValue eval_direct(const PrimePowerModulus& m, u64 a, u64 oracle_ceiling) {
    if (m.q > oracle_ceiling)
        fail(ErrorKind::OracleScaleExceeded,
             "eval_direct: q = " + std::to_string(m.q) + " above oracle ceiling " + std::to_string(oracle_ceiling));
    DirectContext ctx(m);
    return ctx.eval(a % m.q);
}

double salie_phase(const PrimePowerModulus& m) {
    // q is odd so q mod 4 is 1 or 3. Pinned by the direct-oracle equivalence
    // suite, not by a closed-form source.
    return (m.q % 4 == 1) ? 0.0 : kPi / 2.0;
}

double salie_closed_form(u64 s, const PrimePowerModulus& m, int jacobi_s) {
    assert(jacobi_s == 1 || jacobi_s == -1);
    double angle = 4.0 * kPi * (double(s) / double(m.q)) + salie_phase(m);
    return 2.0 * double(jacobi_s) * std::cos(angle);
}

KloostermanValue eval_salie(const PrimePowerModulus& m, u64 a) {
    a %= m.q;
    if (a % m.p == 0) fail(ErrorKind::NotAUnit, "eval_salie: p divides a");
    KloostermanValue out;
    if (jacobi_symbol(i64(a % m.p), m.p) == -1) {
        out.value = 0.0;
        out.is_zero_class = true;
        return out;
    }
    auto roots = sqrt_mod_prime_power(a, m);
    if (!roots) fail(ErrorKind::Usage, "eval_salie: residue class has no root, jacobi table inconsistent");
    u64 s = roots->first;
    out.value = salie_closed_form(s, m, jacobi_symbol(i64(s), m.q));
    out.is_zero_class = false;
    return out;
}

KloostermanTable build_table(const PrimePowerModulus& m, TableSource source, bool include_nonunits,
                             unsigned threads, u64 oracle_ceiling) {
    KloostermanTable table;
    table.modulus = m;
    table.source = source;
    try {
        table.values.assign(m.q, 0.0);
        table.state.assign(m.q, 0);
    } catch (const std::bad_alloc&) {
        fail(ErrorKind::AllocationFailure, "build_table: cannot allocate " + std::to_string(m.q) + " entries");
    }

    const bool need_direct = (source == TableSource::DirectOracle) || include_nonunits;
    if (need_direct && m.q > oracle_ceiling)
        fail(ErrorKind::OracleScaleExceeded,
             "build_table: direct summation needed but q = " + std::to_string(m.q) + " exceeds ceiling");

    if (source == TableSource::DirectOracle) {
        DirectContext ctx(m);
        auto ranges = chunk_ranges(m.q);
        parallel_chunks(ranges.size(), threads, [&](std::size_t c) {
            for (u64 a = ranges[c].first; a < ranges[c].second; ++a) {
                if (!include_nonunits && a % m.p == 0) continue;
                KloostermanValue v = ctx.eval(a);
                table.values[a] = v.value;
                table.state[a] = v.is_zero_class ? 2 : 1;
            }
        });
        return table;
    }

    // SalieFast: mark zero classes from the residue pattern mod p, then fill
    // unit squares by enumerating roots s in [1, (q-1)/2]. Distinct roots in
    // the half range hit distinct squares, so chunked writes never collide.
    std::vector<std::int8_t> qr(m.p, 0); // Jacobi (r/p) for r in [0, p)
    for (u64 r = 1; r < m.p; ++r) qr[r] = -1;
    for (u64 s = 1; s < m.p; ++s) qr[mul_mod(s, s, m.p)] = 1;

    const bool n_odd = (m.n % 2 == 1);
    {
        auto ranges = chunk_ranges(m.q);
        parallel_chunks(ranges.size(), threads, [&](std::size_t c) {
            for (u64 a = ranges[c].first; a < ranges[c].second; ++a) {
                u64 r = a % m.p;
                if (r == 0) continue;
                if (qr[r] == -1) {
                    table.values[a] = 0.0;
                    table.state[a] = 2;
                }
            }
        });
    }
    {
        u64 half = (m.q - 1) / 2;
        auto ranges = chunk_ranges(half);
        parallel_chunks(ranges.size(), threads, [&](std::size_t c) {
            for (u64 i = ranges[c].first; i < ranges[c].second; ++i) {
                u64 s = i + 1;
                if (s % m.p == 0) continue;
                u64 a = mul_mod(s, s, m.q);
                int jac = n_odd ? int(qr[s % m.p]) : 1; // (s/q) = (s/p)^n
                double v = salie_closed_form(s, m, jac);
                if (std::abs(v) > 2.0)
                    fail(ErrorKind::Usage, "build_table: |Kl| > 2, convention bug");
                table.values[a] = v;
                table.state[a] = 1;
            }
        });
    }
    if (include_nonunits) {
        DirectContext ctx(m);
        u64 n_nonunits = m.q / m.p;
        auto ranges = chunk_ranges(n_nonunits);
        parallel_chunks(ranges.size(), threads, [&](std::size_t c) {
            for (u64 i = ranges[c].first; i < ranges[c].second; ++i) {
                u64 a = i * m.p;
                KloostermanValue v = ctx.eval(a);
                table.values[a] = v.value;
                table.state[a] = 1;
            }
        });
    }
    return table;
}

void write_table_csv(const KloostermanTable& table, const std::string& path) {
    std::ostringstream out;
    out << "a,value,is_zero_class\n";
    for (u64 a = 0; a < table.modulus.q; ++a) {
        if (table.state[a] == 0) continue;
        out << a << ',' << fmt12(table.values[a]) << ',' << (table.state[a] == 2 ? 1 : 0) << '\n';
    }
    write_text_file(path, out.str());
}

void write_table_sidecar(const KloostermanTable& table, const std::string& path) {
    nlohmann::json j{
        {"p", table.modulus.p},
        {"n", table.modulus.n},
        {"source", table_source_name(table.source)},
        {"count", table.defined_count()},
    };
    write_json_file(path, j);
}

} // namespace klab
