#include "dirac/calculus.hpp"

#include <algorithm>
#include <cassert>
#include <map>

#include "dirac/symlinalg.hpp"

namespace dirac {

namespace {

std::map<Idx, int> occurrences(const Term& t) {
    std::map<Idx, int> n;
    for (auto& a : t.atoms) {
        for (Idx i : a.indices)
            if (is_sym(i)) ++n[i];
        for (Idx i : a.derivs)
            if (is_sym(i)) ++n[i];
    }
    return n;
}

int max_sym_slot(const Expr& e) {
    int mx = -1;
    for (auto& t : e.terms())
        for (auto& a : t.atoms) {
            for (Idx i : a.indices)
                if (is_sym(i)) mx = std::max(mx, sym_slot(i));
            for (Idx i : a.derivs)
                if (is_sym(i)) mx = std::max(mx, sym_slot(i));
        }
    return mx;
}

/// Raw rename of one term's contracted index pairs into slots >= base.
/// No canonicalization: used before index surgery so injected indices
/// cannot collide with dummies.
Term raw_freshen(const Term& t, int base) {
    auto occ = occurrences(t);
    std::map<Idx, Idx> ren;
    int next = base;
    for (auto& [ix, n] : occ)
        if (n == 2) ren[ix] = sym_idx(next++);
    Term r = t;
    for (auto& a : r.atoms) {
        for (auto& ix : a.indices)
            if (auto it = ren.find(ix); it != ren.end()) ix = it->second;
        for (auto& ix : a.derivs)
            if (auto it = ren.find(ix); it != ren.end()) ix = it->second;
    }
    return r;
}

/// Raw Leibniz spatial derivative of a term at a point.
std::vector<Term> raw_spatial_derivative(const Term& t, Idx dir, Pt at) {
    std::vector<Term> out;
    for (size_t i = 0; i < t.atoms.size(); ++i) {
        const Atom& a = t.atoms[i];
        if (!derivable(a)) continue;
        if (a.kind == AtomKind::Delta) {
            if (a.pt != at && a.pt2 != at) continue;
            Term nt = t;
            nt.atoms[i].derivs.push_back(dir);
            if (a.pt2 == at) nt.coeff = -nt.coeff; // derivative on second slot
            out.push_back(std::move(nt));
        } else {
            if (a.pt != at) continue;
            Term nt = t;
            nt.atoms[i].derivs.push_back(dir);
            out.push_back(std::move(nt));
        }
    }
    return out;
}

std::vector<Term> raw_time_derivative(const Term& t) {
    std::vector<Term> out;
    for (size_t i = 0; i < t.atoms.size(); ++i) {
        const Atom& a = t.atoms[i];
        if (a.kind != AtomKind::Field && a.kind != AtomKind::Momentum &&
            a.kind != AtomKind::Multiplier)
            continue;
        Term nt = t;
        ++nt.atoms[i].tderivs;
        out.push_back(std::move(nt));
    }
    return out;
}

bool derivable(const Atom& a) {
    switch (a.kind) {
    case AtomKind::Field:
    case AtomKind::Momentum:
    case AtomKind::Multiplier:
    case AtomKind::Delta:
        return true;
    default:
        return false;
    }
}

} // namespace

std::vector<Idx> fresh_indices(int n, int base) {
    std::vector<Idx> v;
    for (int i = 0; i < n; ++i) v.push_back(sym_idx(base + i));
    return v;
}

Expr spatial_derivative(const Expr& e, Idx dir, Pt at) {
    std::vector<Term> raw;
    for (auto& t : e.terms())
        for (auto& nt : raw_spatial_derivative(t, dir, at))
            raw.push_back(std::move(nt));
    return canonicalize(std::move(raw));
}

Expr time_derivative(const Expr& e) {
    std::vector<Term> raw;
    for (auto& t : e.terms())
        for (auto& nt : raw_time_derivative(t))
            raw.push_back(std::move(nt));
    return canonicalize(std::move(raw));
}

Expr substitute_family(const Expr& e, AtomKind kind, const std::string& name,
                       const Expr& repl, std::span<const Idx> replFree) {
    Expr acc = Expr::zero();
    int freshBase = std::max(max_sym_slot(e), max_sym_slot(repl)) + 1;
    for (auto& t : e.terms()) {
        Term rest;
        rest.coeff = t.coeff;
        std::vector<Atom> matched;
        for (auto& a : t.atoms) {
            if (a.kind == kind && a.name == name)
                matched.push_back(a);
            else
                rest.atoms.push_back(a);
        }
        Expr piece = canonicalize({rest});
        for (auto& a : matched) {
            if (a.indices.size() != replFree.size())
                throw Error("substitution arity mismatch for " + name);
            Expr r = freshen_dummies(repl, freshBase);
            freshBase += 8;
            // bind replacement frees to the atom's indices via temporaries
            std::vector<Idx> tmp = fresh_indices((int)replFree.size(), freshBase);
            freshBase += (int)replFree.size();
            for (size_t k = 0; k < replFree.size(); ++k)
                r = rename_index(r, replFree[k], tmp[k]);
            for (size_t k = 0; k < replFree.size(); ++k)
                r = rename_index(r, tmp[k], a.indices[k]);
            if (a.pt != Pt::X) r = rename_point(r, Pt::X, a.pt);
            for (int k = 0; k < a.tderivs; ++k) r = time_derivative(r);
            for (Idx d : a.derivs) r = spatial_derivative(r, d, a.pt);
            piece = piece * r;
        }
        acc += piece;
    }
    return acc;
}

Expr instantiate(const Expr& e, Idx freeIdx, int value) {
    return rename_index(e, freeIdx, value);
}

Expr integrate_out(const Expr& e, Pt p) {
    std::vector<Term> raw;
    for (auto& t : e.terms()) {
        int di = -1;
        for (size_t i = 0; i < t.atoms.size(); ++i)
            if (t.atoms[i].kind == AtomKind::Delta && t.atoms[i].references_point(p)) {
                di = (int)i;
                break;
            }
        if (di < 0) {
            bool touches = false;
            for (auto& a : t.atoms)
                if (a.references_point(p)) touches = true;
            throw NotAFunctional(touches ? "point " + pt_name(p) + " not matched by a delta"
                                         : "integrand independent of " + pt_name(p));
        }
        Atom delta = t.atoms[di];
        Pt target = delta.pt == p ? delta.pt2 : delta.pt;
        int sign = 1;
        if (delta.pt == p && delta.derivs.size() % 2 == 1) sign = -1;

        Term base;
        base.coeff = t.coeff * Rational(sign);
        std::vector<int> group; // positions (in base.atoms) of former-p atoms
        for (size_t i = 0; i < t.atoms.size(); ++i) {
            if ((int)i == di) continue;
            Atom a = t.atoms[i];
            bool atP = a.references_point(p);
            if (atP) {
                // move to the delta's surviving point
                int s = 1;
                if (a.kind == AtomKind::Delta) {
                    if (a.pt == p) a.pt = target;
                    if (a.pt2 == p) a.pt2 = target;
                    if (a.pt == a.pt2) throw Error("delta at coincident points");
                    if (a.pt > a.pt2) {
                        std::swap(a.pt, a.pt2);
                        if (a.derivs.size() % 2 == 1) s = -s;
                    }
                } else {
                    a.pt = target;
                }
                base.coeff = base.coeff * Rational(s);
                group.push_back((int)base.atoms.size());
            }
            base.atoms.push_back(std::move(a));
        }

        // distribute the delta's derivatives over the moved group
        std::vector<Term> work{std::move(base)};
        std::vector<std::vector<int>> workGroups{std::move(group)};
        for (Idx d : delta.derivs) {
            std::vector<Term> next;
            std::vector<std::vector<int>> nextGroups;
            for (size_t w = 0; w < work.size(); ++w) {
                if (workGroups[w].empty()) {
                    // derivative of nothing at this point: term drops
                    continue;
                }
                for (int gi : workGroups[w]) {
                    Term nt = work[w];
                    Atom& a = nt.atoms[gi];
                    int s = 1;
                    if (a.kind == AtomKind::Delta && a.pt2 == target)
                        s = -1;
                    a.derivs.push_back(d);
                    nt.coeff = nt.coeff * Rational(s);
                    next.push_back(std::move(nt));
                    nextGroups.push_back(workGroups[w]);
                }
            }
            work = std::move(next);
            workGroups = std::move(nextGroups);
        }
        for (auto& w : work) raw.push_back(std::move(w));
    }
    return canonicalize(std::move(raw));
}

Expr kernel_derivative(const Expr& e, AtomKind kind, const std::string& name,
                       std::span<const Idx> comp, Pt at) {
    int base = max_sym_slot(e) + 1;
    for (Idx c : comp)
        if (is_sym(c)) base = std::max(base, sym_slot(c) + 1);
    Expr e2 = freshen_dummies(e, base);
    std::vector<Term> raw;
    for (auto& t : e2.terms()) {
        for (size_t i = 0; i < t.atoms.size(); ++i) {
            const Atom& a = t.atoms[i];
            if (a.kind != kind || a.name != name) continue;
            if (a.indices.size() != comp.size())
                throw Error("component rank mismatch for " + name);
            if (a.tderivs > 0)
                throw Error("time derivative inside a functional derivative");
            Term nt;
            nt.coeff = t.coeff;
            for (size_t j = 0; j < t.atoms.size(); ++j)
                if (j != i) nt.atoms.push_back(t.atoms[j]);
            for (size_t r = 0; r < comp.size(); ++r)
                nt.atoms.push_back(Atom::kronecker(a.indices[r], comp[r]));
            Atom dl = Atom::delta(a.pt, at);
            dl.derivs = a.derivs; // act on the atom's own point
            if (a.pt == at) throw Error("functional derivative at coincident points");
            if (dl.pt > dl.pt2) {
                std::swap(dl.pt, dl.pt2);
                if (dl.derivs.size() % 2 == 1) nt.coeff = -nt.coeff;
            }
            nt.atoms.push_back(std::move(dl));
            raw.push_back(std::move(nt));
        }
    }
    return canonicalize(std::move(raw));
}

Expr functional_derivative(const Expr& density, Pt densityPt, AtomKind kind,
                           const std::string& name, std::span<const Idx> comp, Pt at) {
    for (Pt p : density.points())
        if (p != densityPt)
            throw NotAFunctional("density has unintegrated point " + pt_name(p));
    Expr k = kernel_derivative(density, kind, name, comp, at);
    if (k.is_zero()) return k;
    return integrate_out(k, densityPt);
}

namespace {

/// Shared skeleton for momentum/variational derivatives: replaces each
/// matching atom occurrence by Kroneckers onto `comp` and applies
/// (-1)^{#derivs} D^{derivs} (and time derivatives when requested).
Expr occurrence_derivative(const Expr& density, const std::string& name,
                           std::span<const Idx> comp, bool velocityOnly) {
    int base = max_sym_slot(density) + 1;
    for (Idx c : comp)
        if (is_sym(c)) base = std::max(base, sym_slot(c) + 1);
    Expr dens = freshen_dummies(density, base);
    Expr acc = Expr::zero();
    for (auto& t : dens.terms()) {
        for (size_t i = 0; i < t.atoms.size(); ++i) {
            const Atom& a = t.atoms[i];
            if (a.kind != AtomKind::Field || a.name != name) continue;
            if (velocityOnly && a.tderivs != 1) continue;
            if (a.indices.size() != comp.size())
                throw Error("component rank mismatch for " + name);
            Term nt;
            nt.coeff = t.coeff;
            for (size_t j = 0; j < t.atoms.size(); ++j)
                if (j != i) nt.atoms.push_back(t.atoms[j]);
            for (size_t r = 0; r < comp.size(); ++r)
                nt.atoms.push_back(Atom::kronecker(a.indices[r], comp[r]));
            Expr piece = canonicalize({nt});
            for (Idx d : a.derivs) piece = -spatial_derivative(piece, d, a.pt);
            if (!velocityOnly)
                for (int k = 0; k < a.tderivs; ++k) piece = -time_derivative(piece);
            acc += piece;
        }
    }
    return acc;
}

} // namespace

Expr velocity_partial(const Expr& density, const std::string& name,
                      std::span<const Idx> comp) {
    return occurrence_derivative(density, name, comp, /*velocityOnly=*/true);
}

Expr variational_derivative(const Expr& density, const std::string& name,
                            std::span<const Idx> comp) {
    return occurrence_derivative(density, name, comp, /*velocityOnly=*/false);
}

Expr poisson_bracket(const Expr& F, Pt pF, const Expr& G, Pt pG,
                     std::span<const CanonicalPair> pairs) {
    auto used = F.points();
    for (Pt p : G.points()) used.insert(p);
    used.insert(pF);
    used.insert(pG);
    Pt z = Pt::X;
    bool found = false;
    for (int i = 0; i < kNumPts; ++i)
        if (!used.count((Pt)i)) {
            z = (Pt)i;
            found = true;
            break;
        }
    if (!found) throw Error("out of point labels in poisson_bracket");

    int base = std::max(max_sym_slot(F), max_sym_slot(G)) + 1;
    Expr acc = Expr::zero();
    for (auto& pr : pairs) {
        std::vector<Idx> comp = fresh_indices(pr.rank, base);
        base += pr.rank;
        Expr dFq = kernel_derivative(F, AtomKind::Field, pr.field, comp, z);
        Expr dGp = kernel_derivative(G, AtomKind::Momentum, pr.field, comp, z);
        Expr dFp = kernel_derivative(F, AtomKind::Momentum, pr.field, comp, z);
        Expr dGq = kernel_derivative(G, AtomKind::Field, pr.field, comp, z);
        Expr combo = dFq * dGp - dFp * dGq;
        if (combo.is_zero()) continue;
        acc += integrate_out(combo, z);
    }
    return acc;
}

void SurfaceTermLog::add(const std::string& op, const Expr& divergence) {
    entries.push_back(op + ": dropped surface term of " + divergence.str());
}

Expr integrate_by_parts(const Expr& e, AtomKind kind, const std::string& name,
                        SurfaceTermLog* log) {
    Expr cur = e;
    std::vector<Expr> seen{cur};
    for (int round = 0; round < 64; ++round) {
        bool applied = false;
        for (auto& t : cur.terms()) {
            int ai = -1;
            for (size_t i = 0; i < t.atoms.size(); ++i) {
                const Atom& a = t.atoms[i];
                if (a.kind == kind && a.name == name && !a.derivs.empty()) {
                    ai = (int)i;
                    break;
                }
            }
            if (ai < 0) continue;
            bool hasOther = false;
            for (size_t i = 0; i < t.atoms.size(); ++i)
                if ((int)i != ai && derivable(t.atoms[i]) &&
                    !(t.atoms[i].kind == kind && t.atoms[i].name == name))
                    hasOther = true;
            bool pureSurface = true;
            for (size_t i = 0; i < t.atoms.size(); ++i)
                if ((int)i != ai && derivable(t.atoms[i])) pureSurface = false;
            if (!hasOther && !pureSurface) continue;

            // remove the term, add back its by-parts image
            Term moved = t;
            Idx d = moved.atoms[ai].derivs.back();
            moved.atoms[ai].derivs.pop_back();
            Expr stripped = canonicalize({moved});
            Expr image = Expr::zero();
            if (!pureSurface) {
                Term self = moved; // Leibniz summand that recreates the term
                self.atoms[ai].derivs.push_back(d);
                image = canonicalize({self}) - spatial_derivative(stripped, d, Pt::X);
            }
            if (log) log->add("integrate_by_parts", stripped);
            Expr termExpr = canonicalize({t});
            Expr next = cur - termExpr + image;
            if (std::find(seen.begin(), seen.end(), next) != seen.end()) {
                applied = false;
                break;
            }
            seen.push_back(next);
            cur = std::move(next);
            applied = true;
            break;
        }
        if (!applied) break;
    }
    return cur;
}

std::optional<std::string> as_total_derivative(const Expr& e) {
    if (e.is_zero()) return std::string("0");
    if (!e.free_indices().empty()) return std::nullopt;
    for (Pt p : e.points())
        if (p != Pt::X) return std::nullopt;

    // candidate densities: strip one derivative from one atom of one term
    struct Cand {
        Expr density;
        Idx dir;
        Expr expansion;
    };
    std::vector<Cand> cands;
    auto have = [&](const Expr& m, Idx d) {
        for (auto& c : cands)
            if (c.dir == d && c.density == m) return true;
        return false;
    };
    for (auto& t : e.terms()) {
        for (size_t i = 0; i < t.atoms.size(); ++i) {
            for (size_t k = 0; k < t.atoms[i].derivs.size(); ++k) {
                Term m = t;
                Idx d = m.atoms[i].derivs[k];
                m.atoms[i].derivs.erase(m.atoms[i].derivs.begin() + k);
                m.coeff = Coefficient(Rational(1), t.coeff.syms);
                Expr md = canonicalize({m});
                if (md.is_zero()) continue;
                if (have(md, d)) continue;
                Expr exp = spatial_derivative(md, d, Pt::X);
                if (exp.is_zero()) continue;
                cands.push_back({md, d, exp});
            }
        }
    }
    if (cands.empty()) return std::nullopt;

    // linear system over term keys with rational unknowns
    using Key = std::pair<std::vector<Atom>, std::vector<std::pair<std::string, int>>>;
    std::map<Key, int> rows;
    auto rowOf = [&](const Term& t) {
        Key k{t.atoms, t.coeff.syms};
        auto [it, _] = rows.try_emplace(k, (int)rows.size());
        return it->second;
    };
    for (auto& c : cands)
        for (auto& t : c.expansion.terms()) rowOf(t);
    for (auto& t : e.terms()) rowOf(t);

    SymMatrix A((int)rows.size(), (int)cands.size() + 1);
    for (size_t j = 0; j < cands.size(); ++j)
        for (auto& t : cands[j].expansion.terms())
            A.at(rowOf(t), (int)j) = SymFrac::rational(t.coeff.rat);
    for (auto& t : e.terms())
        A.at(rowOf(t), (int)cands.size()) = SymFrac::rational(t.coeff.rat);

    auto sol = solve_consistent(A);
    if (!sol) return std::nullopt;
    std::string witness;
    for (size_t j = 0; j < cands.size(); ++j) {
        if ((*sol)[j].is_zero()) continue;
        if (!witness.empty()) witness += " + ";
        witness += (*sol)[j].str() + "*d[" + idx_name(cands[j].dir) + "](" +
                   cands[j].density.str() + ")";
    }
    return witness.empty() ? std::string("0") : witness;
}

bool vanishes_up_to_surface_terms(const Expr& e) {
    return e.is_zero() || as_total_derivative(e).has_value();
}

} // namespace dirac
