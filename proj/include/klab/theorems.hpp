#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "klab/constants.hpp"
#include "klab/rational.hpp"
#include "klab/shortsum.hpp"

namespace klab {

// The p-power error exponent of the quantitative statement: 1/2 for
// 2 <= n <= 5, then 4(n-1)/2^n. The companion alpha is 1 resp. 0, and the
// crossover happens exactly at n = 5 (4*4/32 = 1/2).
struct BetaN {
    unsigned n = 2;
    double beta = 0.5;
    double alpha = 1.0;

    static BetaN make(unsigned n);
};

Rational beta_n_rational(unsigned n);

struct GridPointSpec {
    u64 p = 0;
    unsigned n = 2;
    ShiftSpec ispec;
};

// Hard hypothesis guard shared by all grid drivers: separation condition,
// |I| < p (checked by make_shift_set) and p > max(k_max, 2n-5). Violations
// throw HypothesisViolated naming the precondition; nothing is skipped
// silently.
void require_grid_hypotheses(const PrimePowerModulus& m, u64 H, unsigned k_max);

struct MomentExpansionPoint {
    u64 p = 0;
    unsigned n = 2;
    u64 H = 0;
    std::string ispec;
    bool in_regime = false; // H <= p^regime_exponent (informational)
    std::vector<double> empirical;  // M_k, index k = 0..k_max
    std::vector<double> exact;      // E(S_H^k)
    std::vector<double> deviation;  // |M_k - E(S_H^k)|
};

struct MomentExpansionReport {
    std::vector<MomentExpansionPoint> points;
    unsigned k_max = 0;
    std::vector<std::pair<unsigned, bool>> trend_ok; // per even k <= k_max
    bool final_ceilings_ok = true;
    bool verdict = false;
};

MomentExpansionReport check_moment_expansion(const std::vector<GridPointSpec>& grid, unsigned k_max,
                                             const FrozenConstants& c, unsigned threads);

struct TheoremAPoint {
    u64 p = 0;
    unsigned n = 2;
    u64 H = 0;
    std::string ispec;
    double ks = 0.0;
    bool in_clt_regime = true; // H = 1 is the degenerate atom law
    bool in_regime = false;
};

struct TheoremAReport {
    std::vector<TheoremAPoint> points;
    bool ks_decreasing = false;
    double final_ks = 1.0;
    bool verdict = false;
};

TheoremAReport check_theorem_A(const std::vector<GridPointSpec>& grid, const FrozenConstants& c,
                               unsigned threads);

struct TheoremBInterval {
    double alpha = 0.0;
    double beta = 0.0;
    double p_emp = 0.0;
    double gauss_mass = 0.0;
    double deviation = 0.0;
    double error_shape = 0.0; // max(1/H, (log H / log p)^{3/4}) + p^{-beta_n} + (beta-alpha)/sqrt(H)
    double bound = 0.0;       // C_B * error_shape
    bool within_bound = false;
};

struct TheoremBReport {
    u64 p = 0;
    unsigned n = 2;
    u64 H = 0;
    std::string ispec;
    double beta_n = 0.5;
    std::vector<TheoremBInterval> intervals;
    bool verdict = false;
};

TheoremBReport check_theorem_B(const GridPointSpec& point,
                               const std::vector<std::pair<double, double>>& intervals,
                               const FrozenConstants& c, unsigned threads);

struct BerryEsseenCell {
    u64 H = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double p_mc = 0.0;
    double gauss_mass = 0.0;
    double deviation = 0.0;
    double std_error = 0.0;
    double bound = 0.0; // C_BE * (beta-alpha)/sqrt(H) + 3 stderr
    bool within_bound = false;
};

struct BerryEsseenReport {
    std::vector<BerryEsseenCell> cells;
    // Mean deviation per H (in the listed order) and the step-to-step ratios;
    // ratios near sqrt(H_i/H_{i+1}) are the expected scaling. Steps whose
    // deviations sit at the Monte Carlo noise floor are excluded.
    std::vector<double> mean_deviation_per_h;
    std::vector<double> shrink_ratios;
    u64 mc_samples = 0;
    u64 seed = 0;
    bool verdict = false;
};

BerryEsseenReport check_berry_esseen(const std::vector<u64>& h_values,
                                     const std::vector<std::pair<double, double>>& intervals,
                                     u64 mc_samples, u64 seed, const FrozenConstants& c,
                                     unsigned threads);

// JSON shapes for report files; verdicts recompute bit-exactly from the
// serialized numbers.
nlohmann::json to_json(const MomentExpansionReport& r);
nlohmann::json to_json(const TheoremAReport& r);
nlohmann::json to_json(const TheoremBReport& r);
nlohmann::json to_json(const BerryEsseenReport& r);

} // namespace klab
