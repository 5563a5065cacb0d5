#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dirac/coefficient.hpp"

namespace dirac {

/// Spatial index: 1..3 concrete, >= kSymIdxBase symbolic.
using Idx = int;
inline constexpr Idx kSymIdxBase = 100;

inline Idx sym_idx(int slot) { return kSymIdxBase + slot; }
inline bool is_sym(Idx i) { return i >= kSymIdxBase; }
inline bool is_concrete(Idx i) { return i >= 1 && i <= 3; }
inline int sym_slot(Idx i) { return i - kSymIdxBase; }

std::string idx_name(Idx i);
std::optional<Idx> idx_from_name(const std::string& name);

/// Spatial point labels; X..W are printable, the rest are scratch slots
/// for intermediate multi-point kernels.
enum class Pt : uint8_t { X = 0, Y, Z, W, V4, V5, V6, V7 };
inline constexpr int kNumPts = 8;
std::string pt_name(Pt p);

enum class AtomKind : uint8_t {
    Epsilon,    // Levi-Civita, 3 indices
    Kronecker,  // delta with 2 spatial indices
    Delta,      // Dirac distribution between two points
    Field,
    Momentum,   // canonically conjugate to the field of the same name
    Multiplier, // Lagrange multiplier function
};

struct Atom {
    AtomKind kind = AtomKind::Field;
    std::string name;          // Field/Momentum/Multiplier
    std::vector<Idx> indices;  // Epsilon: 3, Kronecker: 2, tensors: rank
    std::vector<Idx> derivs;   // spatial derivative multiset, kept sorted
    int tderivs = 0;           // time derivatives
    Pt pt = Pt::X;             // Delta: first point (derivatives act here)
    Pt pt2 = Pt::X;            // Delta only: second point

    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;

    static Atom field(std::string n, std::vector<Idx> idx, Pt p = Pt::X) {
        Atom a;
        a.kind = AtomKind::Field;
        a.name = std::move(n);
        a.indices = std::move(idx);
        a.pt = p;
        return a;
    }
    static Atom momentum(std::string n, std::vector<Idx> idx, Pt p = Pt::X) {
        Atom a = field(std::move(n), std::move(idx), p);
        a.kind = AtomKind::Momentum;
        return a;
    }
    static Atom multiplier(std::string n, std::vector<Idx> idx, Pt p = Pt::X) {
        Atom a = field(std::move(n), std::move(idx), p);
        a.kind = AtomKind::Multiplier;
        return a;
    }
    static Atom epsilon(Idx a_, Idx b, Idx c) {
        Atom a;
        a.kind = AtomKind::Epsilon;
        a.indices = {a_, b, c};
        return a;
    }
    static Atom kronecker(Idx a_, Idx b) {
        Atom a;
        a.kind = AtomKind::Kronecker;
        a.indices = {a_, b};
        return a;
    }
    static Atom delta(Pt a_, Pt b) {
        Atom a;
        a.kind = AtomKind::Delta;
        a.pt = a_;
        a.pt2 = b;
        return a;
    }

    /// Epsilon/Kronecker are spatial constants and live at no point.
    bool references_point(Pt p) const {
        if (kind == AtomKind::Epsilon || kind == AtomKind::Kronecker) return false;
        return pt == p || (kind == AtomKind::Delta && pt2 == p);
    }
};

struct Term {
    Coefficient coeff;
    std::vector<Atom> atoms;

    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
};

/// Canonical sum of terms. All public construction paths canonicalize:
/// epsilon/Kronecker identities applied, delta kernels normalized, dummy
/// indices renamed to a fixed scheme, like terms collected, stable order.
/// Structural equality of canonical forms is expression equality.
class Expr {
  public:
    Expr() = default;

    static Expr zero() { return Expr(); }
    static Expr constant(Rational r);
    static Expr constant(Coefficient c);
    static Expr atom(Atom a, Coefficient c = Coefficient::one());
    static Expr from_terms(std::vector<Term> raw); // canonicalizes

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Single term, no atoms -> its coefficient.
    std::optional<Coefficient> as_coefficient() const;

    /// Free (unpaired) symbolic indices; identical for every term.
    std::vector<Idx> free_indices() const;

    std::set<Pt> points() const;
    bool mentions(AtomKind k, const std::string& name) const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr operator*(const Expr& a, const Expr& b); // dummy-hygienic
    friend Expr operator*(const Expr& a, const Coefficient& c);
    friend Expr operator*(const Expr& a, const Rational& r);
    Expr& operator+=(const Expr& b) { return *this = *this + b; }
    Expr& operator-=(const Expr& b) { return *this = *this - b; }

    friend bool operator==(const Expr&, const Expr&) = default;
    friend auto operator<=>(const Expr&, const Expr&) = default;

    std::string str() const;

  private:
    std::vector<Term> terms_;
    friend Expr canonicalize(std::vector<Term> raw);
};

/// Full canonicalization pipeline; idempotent. Throws UnbalancedIndices
/// when a symbolic index occurs more than twice in a term or free index
/// sets differ across terms.
Expr canonicalize(std::vector<Term> raw);

/// Renames a symbolic index wherever it occurs (free occurrences included).
Expr rename_index(const Expr& e, Idx from, Idx to);

/// Moves every atom at `from` to `to` (no delta bookkeeping; label change).
Expr rename_point(const Expr& e, Pt from, Pt to);

std::string render_term(const Term& t);

} // namespace dirac
