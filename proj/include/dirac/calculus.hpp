#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirac/expr.hpp"

namespace dirac {

/// One conjugate pair (field, its momentum) entering the canonical bracket.
struct CanonicalPair {
    std::string field;
    int rank = 1;
};

/// d/dx_dir of an expression, acting at point `at` (Leibniz over atoms;
/// epsilon/Kronecker are constant).
Expr spatial_derivative(const Expr& e, Idx dir, Pt at = Pt::X);

/// d/dt (Leibniz; raises tderivs).
Expr time_derivative(const Expr& e);

/// Substitutes every atom of (kind,name) by `repl`. The replacement's free
/// indices `replFree` bind positionally to the atom's indices; the atom's
/// derivatives (spatial and time) are applied to the substituted expression
/// and its point is honored.
Expr substitute_family(const Expr& e, AtomKind kind, const std::string& name,
                       const Expr& repl, std::span<const Idx> replFree);

/// Instantiates a free symbolic index to a concrete value 1..3.
Expr instantiate(const Expr& e, Idx freeIdx, int value);

/// Integrates out one spatial point: every term must contain a Dirac delta
/// touching `p`, which is collapsed. Throws NotAFunctional otherwise.
Expr integrate_out(const Expr& e, Pt p);

/// Distributional derivative of an arbitrary (multi-point) expression with
/// respect to field/momentum component `name[comp]` at point `at`: inserts
/// delta kernels, applies the product rule.
Expr kernel_derivative(const Expr& e, AtomKind kind, const std::string& name,
                       std::span<const Idx> comp, Pt at);

/// Functional derivative of the spatial integral of `density` (density lives
/// at densityPt) with respect to name[comp](at); local result at `at`.
Expr functional_derivative(const Expr& density, Pt densityPt, AtomKind kind,
                           const std::string& name, std::span<const Idx> comp, Pt at);

/// Pointwise partial derivative of a density with respect to the velocity
/// atom dt(name[comp]) (undifferentiated); used for momenta and Hessians.
Expr velocity_partial(const Expr& density, const std::string& name,
                      std::span<const Idx> comp);

/// Full Euler-Lagrange variational derivative of a first/second-order
/// density with respect to name[comp] including time-derivative terms.
Expr variational_derivative(const Expr& density, const std::string& name,
                            std::span<const Idx> comp);

/// Canonical Poisson bracket {F(pF), G(pG)} over the given pairs; result is
/// a kernel in (pF, pG). F and G must be phase-space expressions (no dt).
Expr poisson_bracket(const Expr& F, Pt pF, const Expr& G, Pt pG,
                     std::span<const CanonicalPair> pairs);

/// Record of a surface term dropped by integration by parts.
struct SurfaceTermLog {
    std::vector<std::string> entries;
    void add(const std::string& op, const Expr& divergence);
};

/// Moves all spatial derivatives off atoms of (kind,name), discarding total
/// derivatives under the declared boundary policy (logged when a log is
/// given).
Expr integrate_by_parts(const Expr& e, AtomKind kind, const std::string& name,
                        SurfaceTermLog* log = nullptr);

/// Decides whether a single-point density is a total spatial derivative
/// sum_j d_j X_j; returns a witness rendering when it is.
std::optional<std::string> as_total_derivative(const Expr& e);

/// True when the density vanishes identically or up to a total derivative.
bool vanishes_up_to_surface_terms(const Expr& e);

/// Fresh symbolic index helper: smallest slots >= `base` giving n ids.
std::vector<Idx> fresh_indices(int n, int base = 60);

} // namespace dirac
