#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <string>

#include "dirac/errors.hpp"

namespace dirac {

/// Exact rational number on 64-bit numerator/denominator.
/// Always normalized: gcd(num,den) = 1, den > 0. Overflow throws.
class Rational {
  public:
    constexpr Rational() = default;
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { reduce(); }

    long long num() const { return num_; }
    long long den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

    friend Rational operator-(const Rational& a) { return checked(-(__int128)a.num_, a.den_); }
    friend Rational operator+(const Rational& a, const Rational& b) {
        return checked((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                       (__int128)a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return checked((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw Error("rational division by zero");
        return checked((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        __int128 l = (__int128)a.num_ * b.den_, r = (__int128)b.num_ * a.den_;
        return l < r ? std::strong_ordering::less
               : l > r ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
    }

    double to_double() const { return (double)num_ / (double)den_; }

    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }

    static Rational abs(const Rational& a) { return a.num_ < 0 ? -a : a; }

  private:
    long long num_ = 0, den_ = 1;

    static Rational checked(__int128 n, __int128 d) {
        if (d == 0) throw Error("rational division by zero");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw Error("rational overflow");
        Rational r;
        r.num_ = (long long)n;
        r.den_ = (long long)d;
        return r;
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }
    void reduce() { *this = checked(num_, den_); }
};

} // namespace dirac
