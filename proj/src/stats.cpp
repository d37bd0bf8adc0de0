#include "klab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "klab/io.hpp"

namespace klab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

// erf(z) for 0 <= z < 1.5 by the alternating Taylor series
//   erf(z) = (2/sqrt(pi)) sum (-1)^n z^(2n+1) / (n! (2n+1)),
// which needs ~25 terms at z = 1.5 and loses no precision there.
double erf_series(double z) {
    double term = z;
    double sum = z;
    double z2 = z * z;
    for (int n = 1; n < 80; ++n) {
        term *= -z2 / double(n);
        double add = term / double(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum * 2.0 / std::sqrt(kPi);
}

// erfc(z) for z >= 1.5 by the Legendre continued fraction
//   erfc(z) = exp(-z^2)/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
// evaluated with the modified Lentz algorithm.
double erfc_cf(double z) {
    const double tiny = 1e-300;
    double c = z;
    double d = 0.0;
    double h = (z == 0.0) ? tiny : z;
    for (int n = 1; n < 300; ++n) {
        double a = double(n) / 2.0;
        d = z + a * d;
        if (d == 0.0) d = tiny;
        c = z + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        double mult = c * d;
        h *= mult;
        if (std::abs(mult - 1.0) < 1e-17) break;
    }
    return std::exp(-z * z) / std::sqrt(kPi) / h;
}

double erfc_pos(double z) {
    if (z < 1.5) return 1.0 - erf_series(z);
    return erfc_cf(z);
}

} // namespace

double gaussian_cdf(double x) {
    double z = std::abs(x) / kSqrt2;
    double tail = 0.5 * erfc_pos(z);
    return x >= 0.0 ? 1.0 - tail : tail;
}

double gaussian_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double ks_statistic_sorted(const std::vector<double>& sorted) {
    if (sorted.empty()) fail(ErrorKind::EmptySample, "ks_statistic: empty sample");
    const double n = double(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double cdf = gaussian_cdf(sorted[i]);
        d = std::max(d, cdf - double(i) / n);
        d = std::max(d, double(i + 1) / n - cdf);
    }
    return d;
}

double ks_statistic(const std::vector<double>& sample) {
    std::vector<double> sorted(sample);
    std::sort(sorted.begin(), sorted.end());
    return ks_statistic_sorted(sorted);
}

double interval_probability(const std::vector<double>& sample, double alpha, double beta) {
    if (sample.empty()) fail(ErrorKind::EmptySample, "interval_probability: empty sample");
    if (!(alpha < beta)) fail(ErrorKind::BadInterval, "interval_probability: need alpha < beta");
    std::uint64_t inside = 0;
    for (double v : sample) inside += (v >= alpha && v <= beta);
    return double(inside) / double(sample.size());
}

std::complex<double> empirical_char_fn(const std::vector<double>& sample, double u) {
    if (sample.empty()) fail(ErrorKind::EmptySample, "empirical_char_fn: empty sample");
    double re = 0.0, im = 0.0;
    double re_c = 0.0, im_c = 0.0; // Kahan compensations
    const double w = 2.0 * kPi * u;
    for (double v : sample) {
        double angle = w * v;
        double x = std::cos(angle);
        double y = std::sin(angle);
        double t1 = x - re_c;
        double s1 = re + t1;
        re_c = (s1 - re) - t1;
        re = s1;
        double t2 = y - im_c;
        double s2 = im + t2;
        im_c = (s2 - im) - t2;
        im = s2;
    }
    return {re / double(sample.size()), im / double(sample.size())};
}

Histogram make_histogram(const std::vector<double>& sample, int bins) {
    if (sample.empty()) fail(ErrorKind::EmptySample, "make_histogram: empty sample");
    if (bins < 2) fail(ErrorKind::Usage, "make_histogram: need at least 2 bins");
    auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
    double lo = *lo_it, hi = *hi_it;
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(std::size_t(bins), 0);
    h.total = sample.size();
    const double inv_w = double(bins) / (hi - lo);
    for (double v : sample) {
        int idx = int((v - lo) * inv_w);
        if (idx >= bins) idx = bins - 1; // v == hi lands in the last bin
        if (idx < 0) idx = 0;
        h.counts[std::size_t(idx)] += 1;
    }
    return h;
}

void write_histogram_csv(const Histogram& h, const std::string& path) {
    std::ostringstream out;
    out << "bin_left,bin_right,count,density,gaussian_density\n";
    for (int i = 0; i < h.bins(); ++i) {
        double left = h.lo + i * h.width();
        double right = (i + 1 == h.bins()) ? h.hi : h.lo + (i + 1) * h.width();
        out << fmt12(left) << ',' << fmt12(right) << ',' << h.counts[std::size_t(i)] << ','
            << fmt12(h.density(i)) << ',' << fmt12(gaussian_pdf(h.center(i))) << '\n';
    }
    write_text_file(path, out.str());
}

} // namespace klab
