#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "errors.hpp"
#include "partition.hpp"

namespace hgm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline BigInt factorial_big(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

inline Rational rising_factorial_exact(const Rational& a, int n) {
    Rational r = 1;
    for (int j = 0; j < n; ++j)
        r *= a + j;
    return r;
}

// (a)_kappa with exact arithmetic
inline Rational gen_pochhammer_exact(const Rational& a, const Partition& kappa) {
    Rational r = 1;
    for (int i = 0; i < kappa.length(); ++i)
        r *= rising_factorial_exact(a - Rational(i, 2), kappa.parts[i]);
    return r;
}

// Parse "3/2", "1.5", "-2" into an exact rational.
Rational rational_from_string(const std::string& s);

std::string rational_to_string(const Rational& r);

} // namespace hgm
