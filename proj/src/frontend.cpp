#include "dirac/frontend.hpp"

#include "dirac/symlinalg.hpp"

namespace dirac {

EomSet euler_lagrange(const LagrangianModel& m) {
    EomSet out;
    auto prs = m.pairs();
    for (auto& pr : prs) {
        std::vector<Idx> comp = fresh_indices(pr.rank, 0);
        out.implicitForm[pr.field] =
            variational_derivative(m.density, pr.field, comp);
    }

    // try the solved-for-dt form: velocities must enter family-diagonally
    // with constant coefficients
    int n = (int)prs.size();
    SymMatrix M(n, n);
    std::map<std::string, Expr> rest;
    bool ok = true;
    for (int r = 0; r < n && ok; ++r) {
        const Expr& eq = out.implicitForm.at(prs[r].field);
        std::vector<Idx> comp = fresh_indices(prs[r].rank, 0);
        Expr residual = Expr::zero();
        for (auto& t : eq.terms()) {
            int vi = -1;
            for (size_t i = 0; i < t.atoms.size(); ++i)
                if (t.atoms[i].tderivs > 0) { vi = (int)i; break; }
            if (vi < 0) {
                residual += Expr::from_terms({t});
                continue;
            }
            const Atom& v = t.atoms[vi];
            if (v.tderivs != 1 || !v.derivs.empty() || t.atoms.size() != 1 ||
                v.kind != AtomKind::Field ||
                !std::equal(v.indices.begin(), v.indices.end(), comp.begin(), comp.end())) {
                ok = false;
                break;
            }
            int c = -1;
            for (int g = 0; g < n; ++g)
                if (prs[g].field == v.name && prs[g].rank == (int)v.indices.size()) c = g;
            if (c < 0) { ok = false; break; }
            M.at(r, c) = M.at(r, c) + SymFrac::coeff(t.coeff);
        }
        if (ok) rest[prs[r].field] = residual;
    }
    if (ok) {
        if (auto inv = inverse(M)) {
            std::map<std::string, Expr> solved;
            bool convertible = true;
            for (int g = 0; g < n && convertible; ++g) {
                Expr rhs = Expr::zero();
                for (int r = 0; r < n; ++r) {
                    if (inv->at(g, r).is_zero()) continue;
                    auto cf = inv->at(g, r).to_coefficient();
                    if (!cf) { convertible = false; break; }
                    rhs -= rest.at(prs[r].field) * *cf;
                }
                if (convertible) solved[prs[g].field] = rhs;
            }
            if (convertible) out.solvedForm = std::move(solved);
        }
    }
    return out;
}

Expr parity_transform_density(const LagrangianModel& m, const Expr& density) {
    std::vector<Term> raw = density.terms();
    for (auto& t : raw) {
        int sign = 1;
        for (auto& a : t.atoms) {
            if (a.kind == AtomKind::Field || a.kind == AtomKind::Momentum) {
                const FieldDecl* f = m.field(a.name);
                if (!f) throw ValidationError("undeclared field " + a.name);
                if (f->parity < 0) sign = -sign;
            }
            if (a.derivs.size() % 2 == 1) sign = -sign;
        }
        if (sign < 0) t.coeff = -t.coeff;
    }
    return canonicalize(std::move(raw));
}

SymmetryVerdict check_parity(const LagrangianModel& m) {
    SymmetryVerdict v;
    Expr transformed = parity_transform_density(m, m.density);
    v.residual = transformed - m.density;
    if (v.residual.is_zero()) {
        v.invariant = true;
    } else if (auto w = as_total_derivative(v.residual)) {
        v.invariant = true;
        v.surfaceWitness = *w;
    }
    return v;
}

} // namespace dirac
