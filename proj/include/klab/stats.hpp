#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "klab/errors.hpp"

namespace klab {

// Standard Gaussian CDF via an in-house erf/erfc (Taylor series below 1.5,
// modified-Lentz continued fraction above), absolute error below 1e-12; no
// dependence on libm's erf.
double gaussian_cdf(double x);
double gaussian_pdf(double x);

// sup over x of |F_emp(x) - Phi(x)|, evaluated exactly at the jump points.
double ks_statistic(const std::vector<double>& sample);
double ks_statistic_sorted(const std::vector<double>& sorted);

// Fraction of the sample inside [alpha, beta].
double interval_probability(const std::vector<double>& sample, double alpha, double beta);

// (1/N) * sum of e^{2 pi i u v}; the 2*pi convention matches char_fn_sh.
std::complex<double> empirical_char_fn(const std::vector<double>& sample, double u);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    int bins() const { return int(counts.size()); }
    double width() const { return (hi - lo) / double(counts.size()); }
    double density(int i) const { return double(counts[i]) / (double(total) * width()); }
    double center(int i) const { return lo + (double(i) + 0.5) * width(); }
};

Histogram make_histogram(const std::vector<double>& sample, int bins);

// "bin_left,bin_right,count,density,gaussian_density"
void write_histogram_csv(const Histogram& h, const std::string& path);

} // namespace klab
