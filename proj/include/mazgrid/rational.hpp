#pragma once

#include <cstdint>
#include <numeric>

#include "mazgrid/errors.hpp"

namespace mazgrid {

/// Exact rational on 64-bit words; enough for the dyadic/ternary partial-sum
/// bookkeeping done here (denominators up to 4^13).
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1) : num(n), den(d) {
        if (den == 0) raise(Errc::BadParams, "zero denominator");
        reduce();
    }
    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
    Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
    Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    double to_double() const { return (double)num / (double)den; }

    static Rational pow(Rational b, int e) {
        Rational r(1);
        for (int i = 0; i < e; ++i) r = r * b;
        return r;
    }
};

} // namespace mazgrid
