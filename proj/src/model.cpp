#include "klab/model.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "klab/parallel.hpp"

namespace klab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double sample_u(Rng& rng) {
    bool atom = (rng.next_u64() >> 63) != 0;
    if (atom) return 0.0;
    double v = rng.uniform01();
    return 2.0 * std::cos(kPi * v);
}

double sample_sh(std::uint64_t H, Rng& rng) {
    if (H == 0) fail(ErrorKind::Usage, "sample_sh: H must be >= 1");
    KahanSum acc;
    for (std::uint64_t h = 0; h < H; ++h) acc.add(sample_u(rng));
    return acc.value() / std::sqrt(double(H));
}

Rational exact_moment_u(unsigned m) {
    if (m > 64) fail(ErrorKind::Usage, "exact_moment_u: m > 64");
    if (m == 0) return 1;
    if (m % 2 == 1) return 0;
    return Rational(big_binomial(m, m / 2), 2);
}

namespace {

// One partition contributes
//   [ k! / prod(v_j!^{m_j}) ] * [ H!/((H-t)! prod(m_j!)) ]
//   * prod(C(v_j, v_j/2)^{m_j}) / 2^t
// where t is the number of parts: the first bracket counts orderings of the
// exponent multiset, the second the placements into H labeled slots.
struct PartitionSum {
    std::uint64_t H;
    unsigned k;
    Rational total = 0;
    std::vector<unsigned> parts;

    void emit() {
        unsigned t = parts.size();
        if (t > H) return;
        BigInt num = big_factorial(k) * big_falling(unsigned(H), t);
        BigInt den = BigInt(1) << t;
        unsigned run = 1;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            num *= big_binomial(parts[i], parts[i] / 2);
            den *= big_factorial(parts[i]);
            if (i + 1 < parts.size() && parts[i + 1] == parts[i]) {
                ++run;
            } else {
                den *= big_factorial(run);
                run = 1;
            }
        }
        total += Rational(num, den);
    }

    void recurse(unsigned remaining, unsigned max_part) {
        if (remaining == 0) {
            emit();
            return;
        }
        for (unsigned v = std::min(remaining, max_part); v >= 2; v -= 2) {
            parts.push_back(v);
            recurse(remaining - v, v);
            parts.pop_back();
        }
    }
};

} // namespace

Rational exact_moment_sh(std::uint64_t H, unsigned k) {
    if (H < 1) fail(ErrorKind::Usage, "exact_moment_sh: H must be >= 1");
    if (H > 64 || k > 16) fail(ErrorKind::ScaleExceeded, "exact_moment_sh: supported range is H <= 64, k <= 16");
    if (k == 0) return 1;
    if (k % 2 == 1) return 0;

    PartitionSum sum;
    sum.H = H;
    sum.k = k;
    sum.recurse(k, k);

    BigInt h_pow = 1;
    for (unsigned i = 0; i < k / 2; ++i) h_pow *= H;
    return sum.total / Rational(h_pow);
}

BigInt gaussian_moment(unsigned k) {
    if (k > 64) fail(ErrorKind::Usage, "gaussian_moment: k > 64");
    if (k % 2 == 1) return 0;
    BigInt r = 1; // (k-1)!! = 1*3*5*...*(k-1)
    for (unsigned i = 1; i < k; i += 2) r *= i;
    return r;
}

namespace {

struct AdaptiveSimpson {
    double t;
    double tol;
    int max_depth = 40;
    bool converged = true;

    double f(double v) const { return std::cos(2.0 * t * std::cos(kPi * v)); }

    double simpson(double a, double fa, double b, double fb, double fm) const {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }

    double recurse(double a, double fa, double b, double fb, double fm, double whole, double eps,
                   int depth) {
        double m = 0.5 * (a + b);
        double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        double flm = f(lm), frm = f(rm);
        double left = simpson(a, fa, m, fm, flm);
        double right = simpson(m, fm, b, fb, frm);
        double delta = left + right - whole;
        if (depth >= max_depth) {
            converged = false;
            return left + right + delta / 15.0;
        }
        if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
        return recurse(a, fa, m, fm, flm, left, eps / 2.0, depth + 1) +
               recurse(m, fm, b, fb, frm, right, eps / 2.0, depth + 1);
    }

    double integrate() {
        // Pre-split into panels finer than the oscillation wavelength so that
        // a coincidentally small correction cannot fake convergence.
        int panels = 16 + int(std::min(std::abs(t), 2.0e4));
        double total = 0.0;
        double eps_per_panel = tol / double(panels);
        for (int i = 0; i < panels; ++i) {
            double a = double(i) / panels;
            double b = double(i + 1) / panels;
            double m = 0.5 * (a + b);
            double fa = f(a), fb = f(b), fm = f(m);
            double whole = simpson(a, fa, b, fb, fm);
            total += recurse(a, fa, b, fb, fm, whole, eps_per_panel, 0);
        }
        return total;
    }
};

} // namespace

double char_fn_u1(double t, double tol) {
    if (std::abs(t) > 1e4) fail(ErrorKind::Usage, "char_fn_u1: |t| > 1e4");
    if (t == 0.0) return 1.0;
    AdaptiveSimpson quad;
    quad.t = t;
    quad.tol = tol;
    double integral = quad.integrate();
    if (!quad.converged) fail(ErrorKind::QuadratureNotConverged, "char_fn_u1: quadrature did not reach tolerance");
    return 0.5 + 0.5 * integral;
}

double char_fn_sh(double u, std::uint64_t H) {
    if (H < 1) fail(ErrorKind::Usage, "char_fn_sh: H must be >= 1");
    double factor = char_fn_u1(2.0 * kPi * u / std::sqrt(double(H)));
    return std::pow(factor, double(H));
}

std::vector<double> mc_sample_sh(std::uint64_t H, std::uint64_t samples, std::uint64_t seed,
                                 unsigned threads) {
    std::vector<double> out(samples, 0.0);
    auto ranges = chunk_ranges(samples);
    parallel_chunks(ranges.size(), threads, [&](std::size_t c) {
        Rng rng = Rng::stream(seed, c);
        for (std::size_t i = ranges[c].first; i < ranges[c].second; ++i) out[i] = sample_sh(H, rng);
    });
    return out;
}

McMoment mc_moment_sh(std::uint64_t H, unsigned k, std::uint64_t samples, std::uint64_t seed,
                      unsigned threads) {
    if (samples == 0) fail(ErrorKind::Usage, "mc_moment_sh: need samples >= 1");
    auto ranges = chunk_ranges(samples);
    std::vector<double> part_sum(ranges.size(), 0.0), part_sq(ranges.size(), 0.0);
    parallel_chunks(ranges.size(), threads, [&](std::size_t c) {
        Rng rng = Rng::stream(seed, c);
        KahanSum s, s2;
        for (std::size_t i = ranges[c].first; i < ranges[c].second; ++i) {
            double v = sample_sh(H, rng);
            double vk = 1.0;
            for (unsigned j = 0; j < k; ++j) vk *= v;
            s.add(vk);
            s2.add(vk * vk);
        }
        part_sum[c] = s.value();
        part_sq[c] = s2.value();
    });
    KahanSum total, total_sq;
    for (double v : part_sum) total.add(v);
    for (double v : part_sq) total_sq.add(v);
    McMoment r;
    r.samples = samples;
    r.mean = total.value() / double(samples);
    double var = total_sq.value() / double(samples) - r.mean * r.mean;
    if (var < 0) var = 0;
    r.std_error = std::sqrt(var / double(samples));
    return r;
}

} // namespace klab
