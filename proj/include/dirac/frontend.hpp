#pragma once

#include <map>
#include <optional>
#include <string>

#include "dirac/model.hpp"

namespace dirac {

struct EomSet {
    /// Implicit equations, one per dynamical field f: variation of the
    /// action with respect to f, canonicalized ("expr = 0"). Free indices
    /// are the first alphabet slots.
    std::map<std::string, Expr> implicitForm;
    /// When the time-derivative coefficient matrix is invertible:
    /// dt(field) = rhs per field, same free-index convention.
    std::optional<std::map<std::string, Expr>> solvedForm;
};

/// Field equations from independent variations of the density.
EomSet euler_lagrange(const LagrangianModel& m);

/// Density with x -> -x applied: declared per-field component signs and a
/// (-1) per spatial derivative.
Expr parity_transform_density(const LagrangianModel& m, const Expr& density);

struct SymmetryVerdict {
    bool invariant = false;
    Expr residual;                             // transformed - original
    std::optional<std::string> surfaceWitness; // set when residual is a pure divergence
};

/// Parity check of the Lagrangian density (equality up to total derivative).
SymmetryVerdict check_parity(const LagrangianModel& m);

} // namespace dirac
