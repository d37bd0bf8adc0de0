#pragma once

#include <cstdint>

#include "klab/errors.hpp"
#include "klab/rational.hpp"
#include "klab/rng.hpp"

namespace klab {

// The value law of the normalized sums: an atom of mass 1/2 at 0 plus the
// arcsine density 1/(2*pi*sqrt(4-x^2)) on (-2,2). U ~ this law; S_H is the
// normalized sum of H independent copies.

// One draw of U. The continuous part is sampled as 2*cos(pi*V), V uniform on
// (0,1), which has exactly the arcsine density (no rejection step).
double sample_u(Rng& rng);

// One draw of S_H = (U_1 + ... + U_H) / sqrt(H).
double sample_sh(std::uint64_t H, Rng& rng);

// E(U^m): 1 for m = 0, C(m, m/2)/2 for even m >= 2, 0 for odd m.
Rational exact_moment_u(unsigned m);

// E(S_H^k), exactly, via the multinomial expansion reorganized over
// partitions of k into at most H even parts (fast enough for H = 64, k = 16).
Rational exact_moment_sh(std::uint64_t H, unsigned k);

// (k-1)!! for even k, 0 for odd k.
BigInt gaussian_moment(unsigned k);

// E(e^{itU}) = 1/2 + (1/2) * integral over (0,1) of cos(2 t cos(pi v)) dv,
// real by symmetry; adaptive Simpson quadrature to `tol`.
double char_fn_u1(double t, double tol = 1e-10);

// E(e^{2 pi i u S_H}) = char_fn_u1(2 pi u / sqrt(H))^H. The 2*pi convention
// is used for every characteristic-function surface in this project.
double char_fn_sh(double u, std::uint64_t H);

struct McMoment {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

// Monte Carlo estimate of E(S_H^k) with the standard error estimated from the
// same sample. Chunked substreams: the result is thread-count independent.
McMoment mc_moment_sh(std::uint64_t H, unsigned k, std::uint64_t samples, std::uint64_t seed,
                      unsigned threads = 1);

// Monte Carlo samples of S_H, deterministic for a given seed.
std::vector<double> mc_sample_sh(std::uint64_t H, std::uint64_t samples, std::uint64_t seed,
                                 unsigned threads = 1);

} // namespace klab
