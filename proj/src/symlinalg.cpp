#include "dirac/symlinalg.hpp"

#include <algorithm>

namespace dirac {

SymFrac::SymFrac(Expr n, Expr d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw Error("symbolic fraction with zero denominator");
    normalize();
}

SymFrac SymFrac::rational(Rational r) {
    return SymFrac(Expr::constant(r), Expr::constant(Rational(1)));
}

SymFrac SymFrac::coeff(const Coefficient& c) {
    return SymFrac(Expr::constant(c), Expr::constant(Rational(1)));
}

SymFrac SymFrac::poly(Expr p) { return SymFrac(std::move(p), Expr::constant(Rational(1))); }

void SymFrac::normalize() {
    if (num.is_zero()) {
        den = Expr::constant(Rational(1));
        return;
    }
    // make the denominator's leading coefficient exactly one
    Coefficient lead = den.terms().front().coeff;
    Coefficient inv = Coefficient::one() / lead;
    num = num * inv;
    den = den * inv;
}

SymFrac operator+(const SymFrac& a, const SymFrac& b) {
    return SymFrac(a.num * b.den + b.num * a.den, a.den * b.den);
}
SymFrac operator-(const SymFrac& a, const SymFrac& b) {
    return SymFrac(a.num * b.den - b.num * a.den, a.den * b.den);
}
SymFrac operator-(const SymFrac& a) {
    SymFrac r = a;
    r.num = -r.num;
    return r;
}
SymFrac operator*(const SymFrac& a, const SymFrac& b) {
    return SymFrac(a.num * b.num, a.den * b.den);
}
SymFrac operator/(const SymFrac& a, const SymFrac& b) {
    if (b.is_zero()) throw Error("division by zero fraction");
    return SymFrac(a.num * b.den, a.den * b.num);
}
bool operator==(const SymFrac& a, const SymFrac& b) { return (a - b).is_zero(); }

std::optional<Coefficient> SymFrac::to_coefficient() const {
    if (num.is_zero()) return Coefficient::zero();
    auto n = num.as_coefficient();
    auto d = den.as_coefficient();
    if (!n || !d) return std::nullopt;
    return *n / *d;
}

std::string SymFrac::str() const {
    if (den.as_coefficient() && den.as_coefficient()->is_one()) return num.str();
    return "(" + num.str() + ")/(" + den.str() + ")";
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix a(n, n);
    for (int i = 0; i < n; ++i) a.at(i, i) = SymFrac::one();
    return a;
}

SymMatrix rref(SymMatrix a, std::vector<int>* pivotCols) {
    if (pivotCols) pivotCols->clear();
    int r = 0;
    for (int c = 0; c < a.cols && r < a.rows; ++c) {
        int piv = -1;
        for (int i = r; i < a.rows; ++i)
            if (!a.at(i, c).is_zero()) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < a.cols; ++j) std::swap(a.at(piv, j), a.at(r, j));
        SymFrac inv = SymFrac::one() / a.at(r, c);
        for (int j = c; j < a.cols; ++j) a.at(r, j) = a.at(r, j) * inv;
        for (int i = 0; i < a.rows; ++i) {
            if (i == r || a.at(i, c).is_zero()) continue;
            SymFrac f = a.at(i, c);
            for (int j = c; j < a.cols; ++j)
                a.at(i, j) = a.at(i, j) - f * a.at(r, j);
        }
        if (pivotCols) pivotCols->push_back(c);
        ++r;
    }
    return a;
}

int rank(const SymMatrix& a) {
    std::vector<int> piv;
    rref(a, &piv);
    return (int)piv.size();
}

std::vector<std::vector<SymFrac>> nullspace(const SymMatrix& a) {
    std::vector<int> piv;
    SymMatrix r = rref(a, &piv);
    std::vector<bool> isPivot(a.cols, false);
    for (int c : piv) isPivot[c] = true;
    std::vector<std::vector<SymFrac>> basis;
    for (int c = 0; c < a.cols; ++c) {
        if (isPivot[c]) continue;
        std::vector<SymFrac> v(a.cols, SymFrac::zero());
        v[c] = SymFrac::one();
        for (size_t k = 0; k < piv.size(); ++k)
            v[piv[k]] = -r.at((int)k, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<SymMatrix> inverse(const SymMatrix& a) {
    if (a.rows != a.cols) return std::nullopt;
    SymMatrix aug(a.rows, 2 * a.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols + i) = SymFrac::one();
    }
    std::vector<int> piv;
    SymMatrix r = rref(std::move(aug), &piv);
    if ((int)piv.size() != a.rows) return std::nullopt;
    for (int k = 0; k < a.rows; ++k)
        if (piv[k] != k) return std::nullopt;
    SymMatrix inv(a.rows, a.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) inv.at(i, j) = r.at(i, a.cols + j);
    return inv;
}

std::optional<std::vector<SymFrac>> solve_consistent(const SymMatrix& aug) {
    std::vector<int> piv;
    SymMatrix r = rref(aug, &piv);
    int n = aug.cols - 1;
    for (int c : piv)
        if (c == n) return std::nullopt; // pivot in the rhs column
    std::vector<SymFrac> x(n, SymFrac::zero());
    for (size_t k = 0; k < piv.size(); ++k) x[piv[k]] = r.at((int)k, n);
    return x;
}

} // namespace dirac
