#include "dirac/expr.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <map>

namespace dirac {

namespace {
constexpr const char* kIdxAlphabet[] = {"i", "j", "k", "l", "m", "n", "p", "q", "r", "s"};
constexpr const char* kPtNames[] = {"x", "y", "z", "w", "v4", "v5", "v6", "v7"};
} // namespace

std::string idx_name(Idx i) {
    if (is_concrete(i)) return std::to_string(i);
    int s = sym_slot(i);
    if (s >= 0 && s < 10) return kIdxAlphabet[s];
    return "u" + std::to_string(s);
}

std::optional<Idx> idx_from_name(const std::string& name) {
    if (name.size() == 1 && name[0] >= '1' && name[0] <= '3') return name[0] - '0';
    for (int s = 0; s < 10; ++s)
        if (name == kIdxAlphabet[s]) return sym_idx(s);
    if (name.size() > 1 && name[0] == 'u') {
        try {
            return sym_idx(std::stoi(name.substr(1)));
        } catch (...) {}
    }
    return std::nullopt;
}

std::string pt_name(Pt p) { return kPtNames[(int)p]; }

// ---------------------------------------------------------------------------
// low-level helpers

namespace {

/// All symbolic index occurrence counts in a term.
std::map<Idx, int> occurrence_counts(const Term& t) {
    std::map<Idx, int> n;
    for (auto& a : t.atoms) {
        for (Idx i : a.indices)
            if (is_sym(i)) ++n[i];
        for (Idx i : a.derivs)
            if (is_sym(i)) ++n[i];
    }
    return n;
}

/// Add one spatial derivative acting at `at`; returns the sign factor.
int add_deriv_at(Atom& a, Idx d, Pt at) {
    if (a.kind == AtomKind::Delta) {
        a.derivs.push_back(d);
        if (at == a.pt) return 1;
        assert(at == a.pt2);
        return -1; // derivative on the second argument of delta(p,q)
    }
    assert(a.pt == at);
    a.derivs.push_back(d);
    return 1;
}

/// Replace point label `from` by `to`; renormalizes delta point order.
/// Returns sign factor; throws on coincident delta points.
int replace_point(Atom& a, Pt from, Pt to) {
    int sign = 1;
    if (a.kind == AtomKind::Delta) {
        if (a.pt == from) a.pt = to;
        if (a.pt2 == from) a.pt2 = to;
        if (a.pt == a.pt2) throw Error("delta at coincident points");
        if (a.pt > a.pt2) {
            std::swap(a.pt, a.pt2);
            if (a.derivs.size() % 2 == 1) sign = -sign;
        }
    } else if (a.pt == from) {
        a.pt = to;
    }
    return sign;
}

int eps_index_of(const Term& t) {
    for (size_t i = 0; i < t.atoms.size(); ++i)
        if (t.atoms[i].kind == AtomKind::Epsilon) return (int)i;
    return -1;
}

/// Reduces one raw term to a list of irreducible terms (epsilon/Kronecker
/// identities, epsilon products expanded, delta kernels star-normalized).
void reduce_term(Term start, std::vector<Term>& out) {
    std::vector<Term> queue{std::move(start)};
    while (!queue.empty()) {
        Term t = std::move(queue.back());
        queue.pop_back();
        bool dead = false, changed = true;
        int guard = 0;
        while (changed && !dead) {
            if (++guard > 20000) throw Error("canonicalization did not terminate");
            changed = false;
            if (t.coeff.is_zero()) { dead = true; break; }

            // epsilon: repeated index kills, all-concrete folds to a sign
            for (size_t i = 0; i < t.atoms.size() && !dead; ++i) {
                Atom& a = t.atoms[i];
                if (a.kind != AtomKind::Epsilon) continue;
                if (a.indices[0] == a.indices[1] || a.indices[0] == a.indices[2] ||
                    a.indices[1] == a.indices[2]) {
                    dead = true;
                    break;
                }
                if (is_concrete(a.indices[0]) && is_concrete(a.indices[1]) &&
                    is_concrete(a.indices[2])) {
                    int x = a.indices[0], y = a.indices[1], z = a.indices[2];
                    int sgn = (y - x) * (z - x) * (z - y) > 0 ? 1 : -1;
                    // distinct values 1..3: sign of the permutation
                    t.coeff = t.coeff * Rational(sgn);
                    t.atoms.erase(t.atoms.begin() + i);
                    changed = true;
                    break;
                }
            }
            if (dead || changed) continue;

            // Kronecker evaluation and contraction
            for (size_t i = 0; i < t.atoms.size() && !dead; ++i) {
                Atom& a = t.atoms[i];
                if (a.kind != AtomKind::Kronecker) continue;
                Idx p = a.indices[0], q = a.indices[1];
                if (is_concrete(p) && is_concrete(q)) {
                    if (p != q) dead = true;
                    else {
                        t.atoms.erase(t.atoms.begin() + i);
                        changed = true;
                    }
                    break;
                }
                if (p == q) { // delta_{aa} = 3
                    t.coeff = t.coeff * Rational(3);
                    t.atoms.erase(t.atoms.begin() + i);
                    changed = true;
                    break;
                }
                // substitute through any other occurrence of a symbolic slot
                auto try_contract = [&](Idx sym, Idx repl) -> bool {
                    if (!is_sym(sym)) return false;
                    for (size_t j = 0; j < t.atoms.size(); ++j) {
                        Atom& b = t.atoms[j];
                        for (auto* vec : {&b.indices, &b.derivs}) {
                            for (auto& ix : *vec) {
                                if (&ix == &a.indices[0] || &ix == &a.indices[1]) continue;
                                if (ix == sym) {
                                    ix = repl;
                                    return true;
                                }
                            }
                        }
                    }
                    return false;
                };
                if (try_contract(p, q) || try_contract(q, p)) {
                    t.atoms.erase(t.atoms.begin() + i);
                    changed = true;
                    break;
                }
            }
            if (dead || changed) continue;

            // product of two epsilons -> determinant of Kroneckers
            {
                int e1 = eps_index_of(t);
                if (e1 >= 0) {
                    int e2 = -1;
                    for (size_t i = e1 + 1; i < t.atoms.size(); ++i)
                        if (t.atoms[i].kind == AtomKind::Epsilon) { e2 = (int)i; break; }
                    if (e2 >= 0) {
                        auto A = t.atoms[e1].indices, B = t.atoms[e2].indices;
                        Term base = t;
                        base.atoms.erase(base.atoms.begin() + e2);
                        base.atoms.erase(base.atoms.begin() + e1);
                        std::array<int, 3> perm{0, 1, 2};
                        do {
                            int inv = 0;
                            for (int u = 0; u < 3; ++u)
                                for (int v = u + 1; v < 3; ++v)
                                    if (perm[u] > perm[v]) ++inv;
                            Term nt = base;
                            nt.coeff = nt.coeff * Rational(inv % 2 ? -1 : 1);
                            for (int u = 0; u < 3; ++u)
                                nt.atoms.push_back(Atom::kronecker(A[u], B[perm[u]]));
                            queue.push_back(std::move(nt));
                        } while (std::next_permutation(perm.begin(), perm.end()));
                        dead = true; // replaced by expansion
                        break;
                    }
                }
            }
            if (dead || changed) continue;

            // delta point-order normal form
            for (auto& a : t.atoms) {
                if (a.kind != AtomKind::Delta) continue;
                if (a.pt == a.pt2) throw Error("delta at coincident points");
                if (a.pt > a.pt2) {
                    std::swap(a.pt, a.pt2);
                    if (a.derivs.size() % 2 == 1) t.coeff = -t.coeff;
                    changed = true;
                }
            }
            if (changed) continue;

            // move atoms off delta second points (Leibniz transfer):
            //   f(q) D^a delta(p,q) = sum_{b<=a} (D^b f)(p) D^{a-b} delta(p,q)
            {
                int moverIdx = -1, movedIdx = -1;
                for (int q = kNumPts - 1; q >= 1 && moverIdx < 0; --q) {
                    Pt qp = (Pt)q;
                    for (size_t i = 0; i < t.atoms.size(); ++i) {
                        const Atom& d = t.atoms[i];
                        if (d.kind == AtomKind::Delta && d.pt2 == qp) {
                            for (size_t j = 0; j < t.atoms.size(); ++j) {
                                if (j == i) continue;
                                if (t.atoms[j].references_point(qp)) {
                                    moverIdx = (int)i;
                                    movedIdx = (int)j;
                                    break;
                                }
                            }
                            if (moverIdx >= 0) break;
                        }
                    }
                }
                if (moverIdx >= 0) {
                    Atom mover = t.atoms[moverIdx];
                    Atom moved = t.atoms[movedIdx];
                    Pt p = mover.pt, q = mover.pt2;
                    Term rest = t;
                    rest.atoms.erase(rest.atoms.begin() + std::max(moverIdx, movedIdx));
                    rest.atoms.erase(rest.atoms.begin() + std::min(moverIdx, movedIdx));
                    size_t nd = mover.derivs.size();
                    for (size_t mask = 0; mask < (size_t{1} << nd); ++mask) {
                        Term nt = rest;
                        Atom dl = mover;
                        dl.derivs.clear();
                        Atom mv = moved;
                        int sign = replace_point(mv, q, p);
                        for (size_t b = 0; b < nd; ++b) {
                            if (mask & (size_t{1} << b))
                                sign *= add_deriv_at(mv, mover.derivs[b], p);
                            else
                                dl.derivs.push_back(mover.derivs[b]);
                        }
                        nt.coeff = nt.coeff * Rational(sign);
                        nt.atoms.push_back(std::move(dl));
                        nt.atoms.push_back(std::move(mv));
                        queue.push_back(std::move(nt));
                    }
                    dead = true;
                    break;
                }
            }
        }
        if (!dead && !t.coeff.is_zero()) out.push_back(std::move(t));
    }
}

/// Canonical dummy naming with sign normalization. Returns nullopt when the
/// term is identically zero by index antisymmetry.
std::optional<Term> canon_naming(const Term& t) {
    auto counts = occurrence_counts(t);
    std::vector<Idx> dummies, frees;
    for (auto& [ix, n] : counts) {
        if (n == 1) frees.push_back(ix);
        else if (n == 2) dummies.push_back(ix);
        else throw UnbalancedIndices("index " + idx_name(ix) + " occurs " +
                                     std::to_string(n) + " times in a term");
    }
    if (dummies.size() > 8) throw Error("too many dummy indices in a term");

    // canonical dummy targets: first alphabet slots not taken by free indices
    std::vector<Idx> targets;
    for (int s = 0; (int)targets.size() < (int)dummies.size(); ++s) {
        Idx cand = sym_idx(s);
        if (std::find(frees.begin(), frees.end(), cand) == frees.end())
            targets.push_back(cand);
    }

    auto normalize_with = [&](const std::map<Idx, Idx>& ren) -> std::pair<std::vector<Atom>, int> {
        std::vector<Atom> atoms = t.atoms;
        int sign = 1;
        for (auto& a : atoms) {
            for (auto& ix : a.indices) {
                auto it = ren.find(ix);
                if (it != ren.end()) ix = it->second;
            }
            for (auto& ix : a.derivs) {
                auto it = ren.find(ix);
                if (it != ren.end()) ix = it->second;
            }
            if (a.kind == AtomKind::Epsilon) {
                // bubble sort, tracking parity
                for (int u = 0; u < 2; ++u)
                    for (int v = 0; v < 2 - u; ++v)
                        if (a.indices[v] > a.indices[v + 1]) {
                            std::swap(a.indices[v], a.indices[v + 1]);
                            sign = -sign;
                        }
            } else if (a.kind == AtomKind::Kronecker) {
                if (a.indices[0] > a.indices[1]) std::swap(a.indices[0], a.indices[1]);
            }
            std::sort(a.derivs.begin(), a.derivs.end());
        }
        std::sort(atoms.begin(), atoms.end());
        return {std::move(atoms), sign};
    };

    std::vector<int> order(dummies.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;

    std::optional<std::vector<Atom>> best;
    bool seenPlus = false, seenMinus = false;
    do {
        std::map<Idx, Idx> ren;
        for (size_t i = 0; i < dummies.size(); ++i) ren[dummies[i]] = targets[order[i]];
        auto [atoms, sign] = normalize_with(ren);
        if (!best || atoms < *best) {
            best = std::move(atoms);
            seenPlus = sign > 0;
            seenMinus = sign < 0;
        } else if (atoms == *best) {
            (sign > 0 ? seenPlus : seenMinus) = true;
        }
    } while (std::next_permutation(order.begin(), order.end()));

    if (seenPlus && seenMinus) return std::nullopt; // antisymmetric: zero
    Term r;
    r.coeff = seenMinus ? -t.coeff : t.coeff;
    r.atoms = std::move(*best);
    return r;
}

std::vector<Idx> term_free_indices(const Term& t) {
    auto counts = occurrence_counts(t);
    std::vector<Idx> frees;
    for (auto& [ix, n] : counts)
        if (n == 1) frees.push_back(ix);
    return frees;
}

struct TermKey {
    std::vector<Atom> atoms;
    std::vector<std::pair<std::string, int>> syms;
    friend auto operator<=>(const TermKey&, const TermKey&) = default;
};

} // namespace

Expr canonicalize(std::vector<Term> raw) {
    // occurrence sanity on the raw input (contraction logic assumes <= 2)
    for (auto& t : raw) {
        for (auto& [ix, n] : occurrence_counts(t))
            if (n > 2)
                throw UnbalancedIndices("index " + idx_name(ix) + " occurs " +
                                        std::to_string(n) + " times in a term");
    }
    std::vector<Term> irreducible;
    for (auto& t : raw) reduce_term(std::move(t), irreducible);

    std::map<TermKey, Rational> collected;
    for (auto& t : irreducible) {
        auto named = canon_naming(t);
        if (!named) continue;
        TermKey key{std::move(named->atoms), named->coeff.syms};
        auto [it, fresh] = collected.try_emplace(std::move(key), named->coeff.rat);
        if (!fresh) it->second += named->coeff.rat;
    }

    Expr e;
    for (auto& [key, rat] : collected) {
        if (rat.is_zero()) continue;
        Term t;
        t.coeff = Coefficient(rat, key.syms);
        t.atoms = key.atoms;
        e.terms_.push_back(std::move(t));
    }

    // free-index uniformity across terms
    if (!e.terms_.empty()) {
        auto ref = term_free_indices(e.terms_.front());
        for (auto& t : e.terms_)
            if (term_free_indices(t) != ref)
                throw UnbalancedIndices("terms differ in free indices");
    }
    return e;
}

// ---------------------------------------------------------------------------
// Expr construction and arithmetic

Expr Expr::constant(Rational r) { return constant(Coefficient(r)); }

Expr Expr::constant(Coefficient c) {
    Term t;
    t.coeff = std::move(c);
    return canonicalize({std::move(t)});
}

Expr Expr::atom(Atom a, Coefficient c) {
    Term t;
    t.coeff = std::move(c);
    t.atoms.push_back(std::move(a));
    return canonicalize({std::move(t)});
}

Expr Expr::from_terms(std::vector<Term> raw) { return canonicalize(std::move(raw)); }

std::optional<Coefficient> Expr::as_coefficient() const {
    if (terms_.empty()) return Coefficient::zero();
    if (terms_.size() == 1 && terms_[0].atoms.empty()) return terms_[0].coeff;
    return std::nullopt;
}

std::vector<Idx> Expr::free_indices() const {
    if (terms_.empty()) return {};
    return term_free_indices(terms_.front());
}

std::set<Pt> Expr::points() const {
    std::set<Pt> ps;
    for (auto& t : terms_)
        for (auto& a : t.atoms) {
            if (a.kind == AtomKind::Epsilon || a.kind == AtomKind::Kronecker) continue;
            ps.insert(a.pt);
            if (a.kind == AtomKind::Delta) ps.insert(a.pt2);
        }
    return ps;
}

bool Expr::mentions(AtomKind k, const std::string& name) const {
    for (auto& t : terms_)
        for (auto& a : t.atoms)
            if (a.kind == k && a.name == name) return true;
    return false;
}

Expr operator+(const Expr& a, const Expr& b) {
    std::vector<Term> raw = a.terms_;
    raw.insert(raw.end(), b.terms_.begin(), b.terms_.end());
    return canonicalize(std::move(raw));
}

Expr operator-(const Expr& a) {
    std::vector<Term> raw = a.terms_;
    for (auto& t : raw) t.coeff = -t.coeff;
    Expr e;
    e.terms_ = std::move(raw); // negation preserves canonical order
    return e;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

namespace {
Idx max_sym_index(const Expr& e) {
    Idx mx = kSymIdxBase - 1;
    for (auto& t : e.terms())
        for (auto& a : t.atoms) {
            for (Idx i : a.indices) mx = std::max(mx, i);
            for (Idx i : a.derivs) mx = std::max(mx, i);
        }
    return mx;
}
} // namespace

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return Expr::zero();
    Idx fresh = std::max(max_sym_index(a), max_sym_index(b)) + 1;
    std::vector<Term> raw;
    for (auto& ta : a.terms_) {
        for (auto& tb : b.terms_) {
            // rename tb-local dummies away from everything else
            Term tbr = tb;
            auto counts = occurrence_counts(tbr);
            std::map<Idx, Idx> ren;
            Idx next = fresh;
            for (auto& [ix, n] : counts)
                if (n == 2) ren[ix] = next++;
            for (auto& at : tbr.atoms) {
                for (auto& ix : at.indices)
                    if (auto it = ren.find(ix); it != ren.end()) ix = it->second;
                for (auto& ix : at.derivs)
                    if (auto it = ren.find(ix); it != ren.end()) ix = it->second;
            }
            Term prod;
            prod.coeff = ta.coeff * tbr.coeff;
            prod.atoms = ta.atoms;
            prod.atoms.insert(prod.atoms.end(), tbr.atoms.begin(), tbr.atoms.end());
            raw.push_back(std::move(prod));
        }
    }
    return canonicalize(std::move(raw));
}

Expr operator*(const Expr& a, const Coefficient& c) {
    if (c.is_zero()) return Expr::zero();
    std::vector<Term> raw = a.terms_;
    for (auto& t : raw) t.coeff = t.coeff * c;
    return canonicalize(std::move(raw));
}

Expr operator*(const Expr& a, const Rational& r) { return a * Coefficient(r); }

Expr rename_index(const Expr& e, Idx from, Idx to) {
    std::vector<Term> raw = e.terms();
    for (auto& t : raw)
        for (auto& a : t.atoms) {
            for (auto& ix : a.indices)
                if (ix == from) ix = to;
            for (auto& ix : a.derivs)
                if (ix == from) ix = to;
        }
    return canonicalize(std::move(raw));
}

Expr rename_point(const Expr& e, Pt from, Pt to) {
    std::vector<Term> raw = e.terms();
    for (auto& t : raw)
        for (auto& a : t.atoms) {
            if (a.pt == from) a.pt = to;
            if (a.kind == AtomKind::Delta && a.pt2 == from) a.pt2 = to;
        }
    return canonicalize(std::move(raw));
}

// ---------------------------------------------------------------------------
// rendering

namespace {

std::string render_atom(const Atom& a) {
    std::string base;
    switch (a.kind) {
    case AtomKind::Epsilon:
        return "eps[" + idx_name(a.indices[0]) + "," + idx_name(a.indices[1]) + "," +
               idx_name(a.indices[2]) + "]";
    case AtomKind::Kronecker:
        return "delta[" + idx_name(a.indices[0]) + "," + idx_name(a.indices[1]) + "]";
    case AtomKind::Delta:
        base = "dirac(" + pt_name(a.pt) + "," + pt_name(a.pt2) + ")";
        break;
    case AtomKind::Field:
    case AtomKind::Momentum:
    case AtomKind::Multiplier: {
        base = (a.kind == AtomKind::Momentum ? "Pi_" + a.name : a.name);
        if (!a.indices.empty()) {
            base += "[";
            for (size_t i = 0; i < a.indices.size(); ++i)
                base += (i ? "," : "") + idx_name(a.indices[i]);
            base += "]";
        }
        break;
    }
    }
    for (int i = 0; i < a.tderivs; ++i) base = "dt(" + base + ")";
    for (auto it = a.derivs.rbegin(); it != a.derivs.rend(); ++it)
        base = "d[" + idx_name(*it) + "](" + base + ")";
    if (a.kind != AtomKind::Delta && a.pt != Pt::X) base += "@" + pt_name(a.pt);
    return base;
}

} // namespace

std::string render_term(const Term& t) {
    std::string atoms;
    for (size_t i = 0; i < t.atoms.size(); ++i)
        atoms += (i ? "*" : "") + render_atom(t.atoms[i]);
    if (atoms.empty()) return t.coeff.str();
    std::string c = t.coeff.str();
    if (c == "1") return atoms;
    if (c == "-1") return "-" + atoms;
    return c + "*" + atoms;
}

std::string Expr::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < terms_.size(); ++i) {
        if (i == 0) {
            s = render_term(terms_[i]);
        } else if (terms_[i].coeff.rat.sign() < 0) {
            Term neg = terms_[i];
            neg.coeff = -neg.coeff;
            s += " - " + render_term(neg);
        } else {
            s += " + " + render_term(terms_[i]);
        }
    }
    return s;
}

} // namespace dirac
