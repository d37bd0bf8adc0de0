#include "klab/shortsum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "klab/io.hpp"
#include "klab/parallel.hpp"
#include "klab/rng.hpp"

namespace klab {

ShiftSpec ShiftSpec::interval(u64 H) {
    ShiftSpec s;
    s.kind = Kind::Interval;
    s.H = H;
    return s;
}

ShiftSpec ShiftSpec::random(u64 H, u64 seed) {
    ShiftSpec s;
    s.kind = Kind::Random;
    s.H = H;
    s.seed = seed;
    return s;
}

ShiftSpec ShiftSpec::explicit_list(std::vector<u64> elements) {
    ShiftSpec s;
    s.kind = Kind::Explicit;
    s.elements = std::move(elements);
    s.H = s.elements.size();
    return s;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

u64 parse_u64(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        u64 v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        fail(ErrorKind::Usage, "cannot parse " + what + ": '" + text + "'");
    }
}

} // namespace

ShiftSpec ShiftSpec::parse(const std::string& text) {
    auto parts = split(text, ':');
    if (parts.empty()) fail(ErrorKind::Usage, "empty shift-set spec");
    if (parts[0] == "interval") {
        if (parts.size() != 2) fail(ErrorKind::Usage, "expected interval:H, got '" + text + "'");
        return interval(parse_u64(parts[1], "H"));
    }
    if (parts[0] == "random") {
        if (parts.size() != 3 || parts[2].rfind("seed=", 0) != 0)
            fail(ErrorKind::Usage, "expected random:H:seed=S, got '" + text + "'");
        return random(parse_u64(parts[1], "H"), parse_u64(parts[2].substr(5), "seed"));
    }
    if (parts[0] == "explicit") {
        if (parts.size() != 2) fail(ErrorKind::Usage, "expected explicit:a,b,c, got '" + text + "'");
        std::vector<u64> elems;
        for (const auto& e : split(parts[1], ',')) elems.push_back(parse_u64(e, "element"));
        return explicit_list(std::move(elems));
    }
    fail(ErrorKind::Usage, "unknown shift-set spec '" + text + "'");
}

std::string ShiftSpec::to_string() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::Interval:
            out << "interval:" << H;
            break;
        case Kind::Random:
            out << "random:" << H << ":seed=" << seed;
            break;
        case Kind::Explicit: {
            out << "explicit:";
            for (std::size_t i = 0; i < elements.size(); ++i) {
                if (i) out << ',';
                out << elements[i];
            }
            break;
        }
    }
    return out.str();
}

namespace {

// Separation condition: elements pairwise incongruent mod p.
void validate_elements(const PrimePowerModulus& m, const std::vector<u64>& elements) {
    if (elements.empty()) fail(ErrorKind::Usage, "shift set must be non-empty");
    if (elements.size() >= m.p)
        fail(ErrorKind::CardinalityTooLarge,
             "|I| = " + std::to_string(elements.size()) + " >= p = " + std::to_string(m.p));
    std::map<u64, u64> seen_class; // residue class mod p -> first element
    for (u64 e : elements) {
        if (e >= m.q) fail(ErrorKind::Usage, "shift element " + std::to_string(e) + " out of range");
        auto [it, fresh] = seen_class.emplace(e % m.p, e);
        if (!fresh) {
            if (it->second == e) fail(ErrorKind::Usage, "duplicate shift element " + std::to_string(e));
            fail(ErrorKind::SeparationViolated,
                 "shifts " + std::to_string(it->second) + " and " + std::to_string(e) +
                     " are congruent mod p = " + std::to_string(m.p));
        }
    }
}

} // namespace

ShiftSet make_shift_set(const PrimePowerModulus& m, const ShiftSpec& spec) {
    ShiftSet set;
    set.modulus = m;
    set.spec_string = spec.to_string();
    switch (spec.kind) {
        case ShiftSpec::Kind::Interval: {
            if (spec.H == 0) fail(ErrorKind::Usage, "interval shift set needs H >= 1");
            if (spec.H >= m.p)
                fail(ErrorKind::CardinalityTooLarge,
                     "|I| = " + std::to_string(spec.H) + " >= p = " + std::to_string(m.p));
            set.elements.resize(spec.H);
            for (u64 i = 0; i < spec.H; ++i) set.elements[i] = i;
            break;
        }
        case ShiftSpec::Kind::Random: {
            if (spec.H == 0) fail(ErrorKind::Usage, "random shift set needs H >= 1");
            if (spec.H >= m.p)
                fail(ErrorKind::CardinalityTooLarge,
                     "|I| = " + std::to_string(spec.H) + " >= p = " + std::to_string(m.p));
            Rng rng(spec.seed);
            std::set<u64> classes;
            std::vector<u64> elems;
            while (elems.size() < spec.H) {
                u64 r = rng.below(m.q);
                if (classes.insert(r % m.p).second) elems.push_back(r);
            }
            std::sort(elems.begin(), elems.end());
            set.elements = std::move(elems);
            break;
        }
        case ShiftSpec::Kind::Explicit: {
            std::vector<u64> elems = spec.elements;
            std::sort(elems.begin(), elems.end());
            set.elements = std::move(elems);
            break;
        }
    }
    validate_elements(m, set.elements);
    return set;
}

EnsembleResult ensemble(const KloostermanTable& table, const ShiftSet& I, unsigned threads) {
    if (table.modulus.q != I.modulus.q || table.modulus.p != I.modulus.p)
        fail(ErrorKind::ModulusMismatch, "ensemble: table and shift set moduli differ");
    const PrimePowerModulus& m = table.modulus;

    // A shift with p not dividing tau drags some centers onto non-unit
    // residues; those table entries must exist before we start.
    for (u64 tau : I.elements) {
        if (tau % m.p != 0 && !table.defined(0))
            fail(ErrorKind::Usage, "ensemble: shift " + std::to_string(tau) +
                                       " reaches non-unit residues but the table has none "
                                       "(rebuild with include_nonunits)");
    }

    std::vector<u64> centers;
    centers.reserve(m.phi);
    for (u64 x = 1; x < m.q; ++x)
        if (x % m.p != 0) centers.push_back(x);

    EnsembleResult result;
    result.shift_set = I;
    result.values.assign(centers.size(), 0.0);
    const double inv_sqrt_h = 1.0 / std::sqrt(double(I.H()));

    auto ranges = chunk_ranges(centers.size());
    parallel_chunks(ranges.size(), threads, [&](std::size_t c) {
        for (std::size_t j = ranges[c].first; j < ranges[c].second; ++j) {
            u64 x = centers[j];
            KahanSum acc;
            for (u64 tau : I.elements) {
                u64 a = x + tau;
                if (a >= m.q) a -= m.q;
                acc.add(table.at(a));
            }
            result.values[j] = acc.value() * inv_sqrt_h;
        }
    });
    return result;
}

double empirical_moment(const EnsembleResult& e, unsigned k, unsigned threads) {
    if (k > 64) fail(ErrorKind::Usage, "empirical_moment: k > 64");
    if (e.values.empty()) fail(ErrorKind::EmptySample, "empirical_moment: empty ensemble");
    if (k == 0) return 1.0;
    double total = deterministic_sum(e.values.size(), threads, [&](std::size_t i) {
        double v = e.values[i];
        double acc = 1.0;
        double base = v;
        unsigned exp = k;
        while (exp > 0) {
            if (exp & 1) acc *= base;
            base *= base;
            exp >>= 1;
        }
        return acc;
    });
    return total / double(e.values.size());
}

void write_ensemble_csv(const EnsembleResult& e, const std::string& path) {
    std::ostringstream out;
    out << "x,value\n";
    const PrimePowerModulus& m = e.shift_set.modulus;
    std::size_t j = 0;
    for (u64 x = 1; x < m.q; ++x) {
        if (x % m.p == 0) continue;
        out << x << ',' << fmt12(e.values[j++]) << '\n';
    }
    write_text_file(path, out.str());
}

} // namespace klab
