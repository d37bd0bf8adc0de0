// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Runs the full desk-scale grids; expect about two minutes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "klab/cli.hpp"
#include "klab/io.hpp"
#include "klab/model.hpp"
#include "klab/parallel.hpp"
#include "klab/stats.hpp"
#include "klab/theorems.hpp"
#include "klab/verify.hpp"

using namespace klab;

namespace {

const FrozenConstants C = FrozenConstants::defaults();
const unsigned kThreads = hardware_threads();

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct ModulusCase {
    u64 p;
    unsigned n;
};

// Required grid plus extra points covering every theta branch (q = 1 and
// q = 3 mod 4), odd and even n, and both Tonelli-Shanks paths.
const std::vector<ModulusCase> kEquivalenceGrid = {
    {3, 2}, {3, 3}, {5, 2}, {5, 3}, {7, 2}, {7, 4}, {11, 2}, {13, 2}, {41, 2},
    {3, 4}, {7, 3}, {11, 3}, {17, 3}, {19, 3}, {97, 2}, {113, 2},
};

std::map<std::pair<u64, unsigned>, KloostermanTable> g_direct, g_salie;

// ---------------------------------------------------------------------------
// C1: oracle equivalence |salie - direct| < 1e-9 over the whole grid, every
// unit, single-threaded in under 60 s. Pins theta and the sign convention.
void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    u64 checked = 0;
    for (auto mc : kEquivalenceGrid) {
        auto m = PrimePowerModulus::make(mc.p, mc.n);
        auto direct = build_table(m, TableSource::DirectOracle, true, 1);
        auto salie = build_table(m, TableSource::SalieFast, true, 1);
        for (u64 a = 1; a < m.q; ++a) {
            if (a % m.p == 0) continue;
            worst = std::max(worst, std::abs(direct.values[a] - salie.values[a]));
            ++checked;
        }
        g_direct.emplace(std::make_pair(mc.p, mc.n), std::move(direct));
        g_salie.emplace(std::make_pair(mc.p, mc.n), std::move(salie));
    }
    double elapsed = seconds_since(t0);
    bool ok = worst < 1e-9 && elapsed < 60.0;
    report(1, ok,
           "oracle equivalence on " + std::to_string(kEquivalenceGrid.size()) + " moduli (" +
               std::to_string(checked) + " units): worst |salie-direct| = " + fmt12(worst) + " < 1e-9, " +
               fmt12(elapsed) + " s single-threaded");
}

// C2: vanishing law (Kl = 0 exactly iff (a/p) = -1) and |Kl| <= 2.
void criterion_2() {
    bool ok = true;
    std::string witness;
    for (auto mc : kEquivalenceGrid) {
        auto m = PrimePowerModulus::make(mc.p, mc.n);
        const auto& direct = g_direct.at({mc.p, mc.n});
        const auto& salie = g_salie.at({mc.p, mc.n});
        for (u64 a = 1; a < m.q && ok; ++a) {
            if (a % m.p == 0) continue;
            bool zero_class = jacobi_symbol(i64(a % m.p), m.p) == -1;
            bool direct_vanishes = std::abs(direct.values[a]) < 1e-9;
            double salie_val = salie.values[a];
            if (zero_class != direct_vanishes || (zero_class && salie_val != 0.0) ||
                std::abs(direct.values[a]) > 2.0 || std::abs(salie_val) > 2.0) {
                ok = false;
                witness = " (first failure at p=" + std::to_string(mc.p) + ", n=" +
                          std::to_string(mc.n) + ", a=" + std::to_string(a) + ")";
            }
        }
    }
    report(2, ok, "vanishing law iff (a/p) = -1 and |Kl| <= 2 on the full grid" + witness);
}

// C3: exact rational model identities in under 10 s.
void criterion_3() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = exact_moment_u(2) == 1 && exact_moment_u(4) == 3;
    for (u64 H = 1; H <= 64 && ok; ++H) ok = exact_moment_sh(H, 2) == 1;
    for (u64 H : {1, 2, 5, 16, 33, 64}) {
        for (unsigned k = 1; k <= 15 && ok; k += 2) ok = exact_moment_sh(H, k) == 0;
        for (unsigned k = 2; k <= 16 && ok; k += 2) {
            Rational bound(big_factorial(k), big_factorial(k / 2));
            ok = exact_moment_sh(H, k) <= bound;
        }
        if (!ok) break;
    }
    double elapsed = seconds_since(t0);
    ok = ok && elapsed < 10.0;
    report(3, ok,
           "exact identities: E(U^2)=1, E(U^4)=3, E(S_H^2)=1, odd moments vanish, "
           "E(S_H^k) <= k!/(k/2)! (H <= 64, k <= 16), " +
               fmt12(elapsed) + " s");
}

// C4: model CLT: exact-moment convergence to the Gaussian moments plus Monte
// Carlo agreement at 4 standard errors.
void criterion_4() {
    bool monotone = true;
    for (unsigned k : {4u, 6u, 8u}) {
        Rational gauss(gaussian_moment(k));
        Rational prev = -1;
        for (u64 H : {2, 4, 8, 16, 32, 64}) {
            Rational dev = exact_moment_sh(H, k) - gauss;
            if (dev < 0) dev = -dev;
            if (prev >= 0 && dev > prev) monotone = false;
            prev = dev;
        }
    }
    bool mc_ok = true;
    double worst_sigmas = 0.0;
    for (u64 H : {8, 64}) {
        for (unsigned k : {2u, 4u, 6u}) {
            McMoment mc = mc_moment_sh(H, k, 1000000, 42, kThreads);
            double exact = to_double(exact_moment_sh(H, k));
            double sigmas = std::abs(mc.mean - exact) / mc.std_error;
            worst_sigmas = std::max(worst_sigmas, sigmas);
            if (sigmas > 4.0) mc_ok = false;
        }
    }
    report(4, monotone && mc_ok,
           "|E(S_H^k) - (k-1)!!| non-increasing for k in {4,6,8} along H = 2..64; Monte Carlo "
           "(1e6 samples, seed 42) worst deviation " +
               fmt12(worst_sigmas) + " standard errors (<= 4)");
}

// C5: moment expansion on the default grid: deviations come down along p and
// meet the frozen ceilings at p = 809, in under 5 minutes.
void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<GridPointSpec> grid;
    for (u64 p : {101, 211, 401, 809}) grid.push_back({p, 2, ShiftSpec::interval(10)});
    auto rep = check_moment_expansion(grid, 4, C, kThreads);
    double elapsed = seconds_since(t0);
    const auto& last = rep.points.back();
    bool ok = rep.verdict && elapsed < 300.0;
    report(5, ok,
           "moment expansion (n=2, H=10, p=101..809): dev(k=2) " + fmt12(rep.points.front().deviation[2]) +
               " -> " + fmt12(last.deviation[2]) + " (<= " + fmt12(C.moment_k2_ceiling) + "), dev(k=4) " +
               fmt12(rep.points.front().deviation[4]) + " -> " + fmt12(last.deviation[4]) + " (<= " +
               fmt12(C.moment_k4_ceiling) + "), " + fmt12(elapsed) + " s");
}

// C6: cardinality law: exact halving for |Tbar| = 1, normalized deviation
// within the frozen ceiling for |Tbar| in {2, 3}.
void criterion_6() {
    bool ok = true;
    double worst = 0.0;
    for (auto mc : kEquivalenceGrid) {
        auto m = PrimePowerModulus::make(mc.p, mc.n);
        auto single = cardinality_check(ShiftMultiplicity::parse(m, "0:2"));
        if (single.count != m.phi / 2 || single.normalized_deviation != 0.0) ok = false;
    }
    for (u64 p : {101, 211, 401}) {
        auto m = PrimePowerModulus::make(p, 2);
        for (const char* txt : {"0:2,1:2", "0:1,1:1,2:1"}) {
            auto rep = cardinality_check(ShiftMultiplicity::parse(m, txt));
            worst = std::max(worst, rep.normalized_deviation);
            if (rep.normalized_deviation > C.card_deviation_ceiling) ok = false;
        }
    }
    report(6, ok,
           "cardinality law: |A| = phi/2 exactly for |Tbar| = 1; worst normalized deviation " +
               fmt12(worst) + " <= " + fmt12(C.card_deviation_ceiling) + " for |Tbar| in {2,3}");
}

// C7: counting bound N(mu, ell; w) <= 2 |T| 2^|T| for all ell with entries in
// {-2..2}, plus the exact partition identity.
void criterion_7() {
    bool ok = true;
    double worst_ratio = 0.0;
    u64 cases = 0;
    for (u64 p : {5, 13, 41, 101, 211}) {
        for (unsigned n : {2u, 3u}) {
            auto m = PrimePowerModulus::make(p, n);
            std::vector<std::string> patterns = {"0:2", "0:2,1:2", "0:2,1:1,2:2"};
            for (const auto& txt : patterns) {
                auto mu = ShiftMultiplicity::parse(m, txt);
                std::size_t t = mu.support().size();
                std::vector<i64> ell(t, -2);
                for (;;) {
                    bool nonzero = false;
                    for (i64 l : ell) nonzero |= (l != 0);
                    if (nonzero) {
                        auto rep = check_counting_bound(mu, ell, C.counting_bound_factor);
                        ++cases;
                        worst_ratio = std::max(worst_ratio, double(rep.n_max) / (double(t) * std::ldexp(1.0, int(t))));
                        if (!rep.within_bound || rep.sum_over_w != rep.j_only_count) ok = false;
                    }
                    std::size_t i = 0;
                    while (i < t && ell[i] == 2) {
                        ell[i] = -2;
                        ++i;
                    }
                    if (i == t) break;
                    ++ell[i];
                }
            }
        }
    }
    report(7, ok,
           "counting bound over " + std::to_string(cases) + " (p, n, mu, ell) cases: max N / (|T| 2^|T|) = " +
               fmt12(worst_ratio) + " <= " + fmt12(C.counting_bound_factor) +
               "; partition identity sum_w N = #(j>=2 tuples) exact everywhere");
}

// C8: qualitative CLT at desk scale: KS decreasing along the default grid,
// final KS <= 0.08, under 2 minutes.
void criterion_8() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<GridPointSpec> grid = {{101, 2, ShiftSpec::interval(10)},
                                       {211, 2, ShiftSpec::interval(16)},
                                       {401, 2, ShiftSpec::interval(25)},
                                       {499, 2, ShiftSpec::interval(40)}};
    auto rep = check_theorem_A(grid, C, kThreads);
    double elapsed = seconds_since(t0);
    bool ok = rep.verdict && elapsed < 120.0;
    std::string kss;
    for (const auto& pt : rep.points) kss += fmt12(pt.ks) + " ";
    report(8, ok,
           "KS along (p,H) grid: " + kss + "decreasing, final " + fmt12(rep.final_ks) + " <= " +
               fmt12(C.theorem_a_final_ks) + ", " + fmt12(elapsed) + " s");
}

// C9: quantitative bound at (499, 2, H = 40) with the frozen factor, plus the
// exact beta_n table.
void criterion_9() {
    GridPointSpec point{499, 2, ShiftSpec::interval(40)};
    auto rep = check_theorem_B(point, {{-1.0, 1.0}, {0.0, 2.0}, {-2.0, -0.5}}, C, kThreads);
    bool beta_ok = beta_n_rational(5) == Rational(1, 2) && beta_n_rational(6) == Rational(5, 16);
    for (unsigned n = 2; n <= 5; ++n) beta_ok = beta_ok && beta_n_rational(n) == Rational(1, 2);
    double worst = 0.0;
    for (const auto& cell : rep.intervals) worst = std::max(worst, cell.deviation / cell.error_shape);
    report(9, rep.verdict && beta_ok,
           "interval probabilities at (p=499, n=2, H=40): worst deviation/shape = " + fmt12(worst) +
               " <= C_B = " + fmt12(C.theorem_b_factor) + "; beta_n table exact (beta_5 = 1/2, beta_6 = 5/16)");
}

// C10: histogram reproduction: 1640 values, histogram written, KS <= 0.15,
// byte-identical outputs across thread counts.
void criterion_10() {
    namespace fs = std::filesystem;
    auto run_fig = [&](const std::string& dir, const char* threads) {
        fs::remove_all(dir);
        const char* argv[] = {"klab", "figure1", "--out", dir.c_str(), "--threads", threads};
        return cli_main(6, argv);
    };
    std::string d1 = "/tmp/klab_acc_fig1_a", d2 = "/tmp/klab_acc_fig1_b";
    int rc1 = run_fig(d1, "1");
    int rc2 = run_fig(d2, "4");
    bool ok = rc1 == 0 && rc2 == 0;
    std::string detail;
    if (ok) {
        for (const char* name : {"figure1_histogram.csv", "figure1_ensemble.csv", "figure1_report.json"}) {
            if (read_text_file(d1 + "/" + name) != read_text_file(d2 + "/" + name)) {
                ok = false;
                detail = std::string(" (") + name + " differs across thread counts)";
            }
        }
    }
    double ks = 1.0;
    std::size_t count = 0;
    if (ok) {
        auto rep = nlohmann::json::parse(read_text_file(d1 + "/figure1_report.json"));
        ks = rep["ks"].get<double>();
        count = rep["count"].get<std::size_t>();
        ok = count == 1640 && ks <= C.figure1_ks_ceiling && rep["ks_ok"].get<bool>();
    }
    report(10, ok,
           "histogram ensemble (p=41, n=2, |I|=29): " + std::to_string(count) + " values, KS = " +
               fmt12(ks) + " <= " + fmt12(C.figure1_ks_ceiling) +
               ", byte-identical across --threads 1/4" + detail);
}

// C11: Berry-Esseen model check on H in {4, 16, 64, 256}.
void criterion_11() {
    auto rep = check_berry_esseen({4, 16, 64, 256}, {{-1.0, 1.0}, {0.0, 2.0}, {-0.5, 0.5}}, 100000, 42,
                                  C, kThreads);
    double worst_excess = 0.0;
    for (const auto& cell : rep.cells) worst_excess = std::max(worst_excess, cell.deviation / cell.bound);
    report(11, rep.verdict,
           "Berry-Esseen Monte Carlo (1e5 samples/H, seed 42): worst deviation/bound = " +
               fmt12(worst_excess) + " with bound " + fmt12(C.berry_esseen_factor) +
               "*(b-a)/sqrt(H) + 3 stderr; deviations shrink along H");
}

} // namespace

int main() {
    std::printf("acceptance suite: %u worker threads\n", kThreads);
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_failures == 0) {
        std::printf("acceptance suite: all 11 criteria passed\n");
        return 0;
    }
    std::printf("acceptance suite: %d criteria FAILED\n", g_failures);
    return 1;
}
