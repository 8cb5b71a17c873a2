#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

namespace rmtlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rational_pow(const Rational& base, int exp) {
    Rational r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Exact dyadic value of a double.
inline Rational rational_from_double(double x) {
    if (x == 0.0) return Rational(0);
    int e = 0;
    const double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5, 1)
    const long long mant = static_cast<long long>(std::ldexp(m, 53));
    const int shift = e - 53;
    Rational r(mant);
    BigInt two = 1;
    if (shift > 0) {
        two <<= shift;
        r *= Rational(two);
    } else if (shift < 0) {
        two <<= -shift;
        r /= Rational(two);
    }
    return r;
}

// "31/9" for proper fractions, "5" when the denominator is one.
inline std::string rational_str(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

}  // namespace rmtlab
