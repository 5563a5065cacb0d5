#pragma once

#include <optional>
#include <vector>

#include "dirac/expr.hpp"

namespace dirac {

/// Element of the fraction field over the symbol ring: quotient of two
/// atom-free canonical expressions (polynomials in the symbolic constants
/// with exact rational coefficients). All arithmetic exact.
struct SymFrac {
    Expr num, den;

    SymFrac() : num(Expr::zero()), den(Expr::constant(Rational(1))) {}
    SymFrac(Expr n, Expr d);

    static SymFrac zero() { return SymFrac(); }
    static SymFrac one() { return rational(Rational(1)); }
    static SymFrac rational(Rational r);
    static SymFrac coeff(const Coefficient& c);
    static SymFrac poly(Expr p);

    bool is_zero() const { return num.is_zero(); }

    friend SymFrac operator+(const SymFrac& a, const SymFrac& b);
    friend SymFrac operator-(const SymFrac& a, const SymFrac& b);
    friend SymFrac operator-(const SymFrac& a);
    friend SymFrac operator*(const SymFrac& a, const SymFrac& b);
    friend SymFrac operator/(const SymFrac& a, const SymFrac& b);
    friend bool operator==(const SymFrac& a, const SymFrac& b);

    /// Monomial-over-monomial fractions convert exactly.
    std::optional<Coefficient> to_coefficient() const;

    std::string str() const;

  private:
    void normalize();
};

struct SymMatrix {
    int rows = 0, cols = 0;
    std::vector<SymFrac> m;

    SymMatrix() = default;
    SymMatrix(int r, int c) : rows(r), cols(c), m((size_t)r * c) {}

    SymFrac& at(int r, int c) { return m[(size_t)r * cols + c]; }
    const SymFrac& at(int r, int c) const { return m[(size_t)r * cols + c]; }

    static SymMatrix identity(int n);
};

/// Reduced row echelon form; records pivot columns when requested.
SymMatrix rref(SymMatrix a, std::vector<int>* pivotCols = nullptr);

int rank(const SymMatrix& a);

/// Basis of the right null space.
std::vector<std::vector<SymFrac>> nullspace(const SymMatrix& a);

std::optional<SymMatrix> inverse(const SymMatrix& a);

/// Solves the augmented system [A|b] (last column is b). Returns one
/// solution with free variables set to zero, or nullopt when inconsistent.
std::optional<std::vector<SymFrac>> solve_consistent(const SymMatrix& aug);

} // namespace dirac
