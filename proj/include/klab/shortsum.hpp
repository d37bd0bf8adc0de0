#pragma once

#include <string>
#include <vector>

#include "klab/kloosterman.hpp"

namespace klab {

// How a shift set is produced; kept around verbatim for provenance in output
// files.
struct ShiftSpec {
    enum class Kind { Interval, Random, Explicit };
    Kind kind = Kind::Interval;
    u64 H = 0;
    u64 seed = 0;
    std::vector<u64> elements;

    static ShiftSpec interval(u64 H);
    static ShiftSpec random(u64 H, u64 seed);
    static ShiftSpec explicit_list(std::vector<u64> elements);

    // "interval:29" | "random:29:seed=7" | "explicit:1,9,12"
    static ShiftSpec parse(const std::string& text);
    std::string to_string() const;
};

// The set I of translation offsets. Elements are pairwise incongruent mod p
// (the separation condition), which forces |I| < p.
struct ShiftSet {
    PrimePowerModulus modulus;
    std::vector<u64> elements; // strictly increasing residues mod q
    std::string spec_string;

    u64 H() const { return elements.size(); }
};

ShiftSet make_shift_set(const PrimePowerModulus& m, const ShiftSpec& spec);

// One value per unit center x (increasing order of representatives in [1,q)):
// (1/sqrt(H)) * sum over tau in I of Kl(x + tau).
struct EnsembleResult {
    ShiftSet shift_set;
    std::vector<double> values;
};

EnsembleResult ensemble(const KloostermanTable& table, const ShiftSet& I, unsigned threads = 1);

// (1/phi) * sum of values^k, compensated summation; k up to 64.
double empirical_moment(const EnsembleResult& e, unsigned k, unsigned threads = 1);

void write_ensemble_csv(const EnsembleResult& e, const std::string& path);

} // namespace klab
