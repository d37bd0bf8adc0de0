#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace klab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt big_factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

inline BigInt big_binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

// n * (n-1) * ... * (n-k+1)
inline BigInt big_falling(unsigned n, unsigned k) {
    BigInt r = 1;
    for (unsigned i = 0; i < k; ++i) r *= n - i;
    return r;
}

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

} // namespace klab
