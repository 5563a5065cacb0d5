#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dirac/rational.hpp"

namespace dirac {

/// Name of the formal imaginary unit in the coefficient ring (i^2 = -1).
inline constexpr const char* kImagUnit = "i";

/// Exact coefficient: rational times a monomial in opaque symbolic
/// constants (c, pi, alpha, user-declared) with integer exponents.
/// The imaginary unit reduces modulo i^2 = -1. Never evaluated to float
/// in symbolic mode.
struct Coefficient {
    Rational rat;
    std::vector<std::pair<std::string, int>> syms; // sorted by name, no zero exponents

    Coefficient() = default;
    explicit Coefficient(Rational r) : rat(r) {}
    Coefficient(Rational r, std::vector<std::pair<std::string, int>> s)
        : rat(r), syms(std::move(s)) {
        normalize();
    }

    static Coefficient zero() { return Coefficient(Rational(0)); }
    static Coefficient one() { return Coefficient(Rational(1)); }
    static Coefficient symbol(const std::string& name, int exp = 1) {
        return Coefficient(Rational(1), {{name, exp}});
    }

    bool is_zero() const { return rat.is_zero(); }
    bool is_rational() const { return syms.empty(); }
    bool is_one() const { return rat.is_one() && syms.empty(); }

    Coefficient& normalize() {
        if (rat.is_zero()) { syms.clear(); return *this; }
        std::vector<std::pair<std::string, int>> out;
        for (auto& [n, e] : syms) {
            if (e == 0) continue;
            if (n == kImagUnit) {
                int m = ((e % 4) + 4) % 4;
                if (m == 2 || m == 3) rat = -rat;
                if (m == 1 || m == 3) out.emplace_back(n, 1);
            } else {
                out.emplace_back(n, e);
            }
        }
        std::sort(out.begin(), out.end());
        // merge duplicates (callers may concatenate)
        std::vector<std::pair<std::string, int>> merged;
        for (auto& p : out) {
            if (!merged.empty() && merged.back().first == p.first)
                merged.back().second += p.second;
            else
                merged.push_back(p);
        }
        std::erase_if(merged, [](auto& p) { return p.second == 0; });
        syms = std::move(merged);
        return *this;
    }

    friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
        Coefficient r;
        r.rat = a.rat * b.rat;
        r.syms = a.syms;
        r.syms.insert(r.syms.end(), b.syms.begin(), b.syms.end());
        r.normalize();
        return r;
    }
    friend Coefficient operator/(const Coefficient& a, const Coefficient& b) {
        if (b.is_zero()) throw Error("coefficient division by zero");
        Coefficient inv;
        inv.rat = Rational(1) / b.rat;
        for (auto& [n, e] : b.syms) inv.syms.emplace_back(n, -e);
        return a * inv;
    }
    friend Coefficient operator-(const Coefficient& a) {
        Coefficient r = a;
        r.rat = -r.rat;
        return r;
    }
    friend Coefficient operator*(const Coefficient& a, const Rational& b) {
        Coefficient r = a;
        r.rat *= b;
        if (r.rat.is_zero()) r.syms.clear();
        return r;
    }

    friend bool operator==(const Coefficient&, const Coefficient&) = default;
    friend auto operator<=>(const Coefficient& a, const Coefficient& b) {
        if (auto c = a.syms <=> b.syms; c != 0) return c;
        return a.rat <=> b.rat;
    }

    int symbol_exp(const std::string& name) const {
        for (auto& [n, e] : syms)
            if (n == name) return e;
        return 0;
    }

    /// "−3/8*c^-1*pi^-1"; bare rational when no symbols; "c" when rational is 1.
    std::string str() const {
        if (rat.is_zero()) return "0";
        std::string s;
        bool needRat = syms.empty() || !(rat.is_one() || rat == Rational(-1));
        if (needRat) s = rat.str();
        else if (rat == Rational(-1)) s = "-";
        for (auto& [n, e] : syms) {
            if (!s.empty() && s != "-") s += "*";
            s += n;
            if (e != 1) s += "^" + std::to_string(e);
        }
        return s;
    }
};

} // namespace dirac
