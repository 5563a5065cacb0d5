#pragma once

#include <string>
#include <vector>

#include "dirac/calculus.hpp"
#include "dirac/expr.hpp"

namespace dirac {

struct FieldDecl {
    std::string name;
    int rank = 1;    // number of spatial indices (0..2)
    int parity = 1;  // +1 / -1 component sign under x -> -x
    bool dynamical = true;
};

struct LagrangianModel {
    std::string name;
    std::vector<FieldDecl> fields;
    Expr density;                         // first order in time derivatives
    std::vector<Expr> auxiliaryConditions;
    std::vector<std::string> constants;   // user-declared symbols (c, pi built in)

    const FieldDecl* field(const std::string& n) const {
        for (auto& f : fields)
            if (f.name == n) return &f;
        return nullptr;
    }

    std::vector<CanonicalPair> pairs() const {
        std::vector<CanonicalPair> p;
        for (auto& f : fields)
            if (f.dynamical) p.push_back({f.name, f.rank});
        return p;
    }

    /// Phase-space dimension per point: 2 x (number of field components).
    int phase_components() const {
        int n = 0;
        for (auto& f : fields)
            if (f.dynamical) n += components(f.rank);
        return 2 * n;
    }

    static int components(int rank) {
        int c = 1;
        for (int i = 0; i < rank; ++i) c *= 3;
        return c;
    }

    /// Structural checks; throws ValidationError.
    void validate() const;
};

/// All concrete component multi-indices of a given rank, in row-major order.
std::vector<std::vector<Idx>> component_tuples(int rank);

} // namespace dirac
