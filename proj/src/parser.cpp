#include "dirac/parser.hpp"

#include <cctype>
#include <map>
#include <set>

namespace dirac {

namespace {

const std::set<std::string> kReserved = {"model", "field",   "rank",      "parity",
                                         "constant", "density", "auxiliary", "dt",
                                         "d",        "eps",     "delta",     "dirac"};
const std::set<std::string> kBuiltinConstants = {"c", "pi"};

struct Token {
    enum Kind { Ident, Int, Punct, End } kind = End;
    std::string text;
    long long value = 0;
    int line = 1, col = 1;
};

struct Lexer {
    std::string src;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(std::string s) : src(std::move(s)) {}

    void advance() {
        if (pos < src.size() && src[pos] == '\n') { ++line; col = 1; }
        else ++col;
        ++pos;
    }

    Token next() {
        while (pos < src.size()) {
            char ch = src[pos];
            if (std::isspace((unsigned char)ch)) { advance(); continue; }
            if (ch == '#') { // comment to end of line
                while (pos < src.size() && src[pos] != '\n') advance();
                continue;
            }
            break;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (pos >= src.size()) return t;
        char ch = src[pos];
        if (std::isalpha((unsigned char)ch) || ch == '_') {
            t.kind = Token::Ident;
            while (pos < src.size() &&
                   (std::isalnum((unsigned char)src[pos]) || src[pos] == '_' ||
                    src[pos] == '-')) {
                // a dash is part of an identifier only when followed by alnum
                if (src[pos] == '-' &&
                    !(pos + 1 < src.size() && std::isalnum((unsigned char)src[pos + 1])))
                    break;
                t.text += src[pos];
                advance();
            }
            return t;
        }
        if (std::isdigit((unsigned char)ch)) {
            t.kind = Token::Int;
            while (pos < src.size() && std::isdigit((unsigned char)src[pos])) {
                t.text += src[pos];
                advance();
            }
            t.value = std::stoll(t.text);
            return t;
        }
        t.kind = Token::Punct;
        t.text = std::string(1, ch);
        advance();
        return t;
    }
};

struct Parser {
    std::vector<Token> toks;
    size_t at = 0;
    LagrangianModel model;
    std::map<std::string, Idx> indexNames;
    int nextIndexSlot = 20; // custom index names beyond the standard alphabet
    bool allowKernels = false;

    explicit Parser(const std::string& src) {
        Lexer lx(src);
        for (;;) {
            Token t = lx.next();
            toks.push_back(t);
            if (t.kind == Token::End) break;
        }
    }

    const Token& peek(int k = 0) const {
        return toks[std::min(at + k, toks.size() - 1)];
    }
    Token take() { return toks[std::min(at++, toks.size() - 1)]; }
    [[noreturn]] void fail(const std::string& msg, const Token& t) {
        throw SyntaxError(msg + (t.text.empty() ? "" : " near '" + t.text + "'"), t.line,
                          t.col);
    }
    bool accept(const std::string& p) {
        if (peek().kind == Token::Punct && peek().text == p) { ++at; return true; }
        return false;
    }
    void expect(const std::string& p) {
        if (!accept(p)) fail("expected '" + p + "'", peek());
    }
    bool acceptIdent(const std::string& w) {
        if (peek().kind == Token::Ident && peek().text == w) { ++at; return true; }
        return false;
    }
    std::string expectIdent() {
        if (peek().kind != Token::Ident) fail("expected identifier", peek());
        return take().text;
    }

    bool isConstant(const std::string& n) const {
        if (kBuiltinConstants.count(n)) return true;
        for (auto& c : model.constants)
            if (c == n) return true;
        return false;
    }

    Idx parseIndex() {
        Token t = take();
        if (t.kind == Token::Int) {
            if (t.value < 1 || t.value > 3) fail("index value out of range", t);
            return (Idx)t.value;
        }
        if (t.kind != Token::Ident) fail("expected index", t);
        if (auto ix = idx_from_name(t.text)) return *ix;
        auto [it, fresh] = indexNames.try_emplace(t.text, sym_idx(nextIndexSlot));
        if (fresh) ++nextIndexSlot;
        return it->second;
    }

    std::vector<Idx> parseIndexList() {
        std::vector<Idx> v;
        expect("[");
        v.push_back(parseIndex());
        while (accept(",")) v.push_back(parseIndex());
        expect("]");
        return v;
    }

    Pt parsePoint() {
        Token t = take();
        if (t.kind == Token::Ident)
            for (int p = 0; p < kNumPts; ++p)
                if (pt_name((Pt)p) == t.text) return (Pt)p;
        fail("expected point label", t);
    }

    Expr parseExpr() {
        bool neg = false;
        if (accept("-")) neg = true;
        else accept("+");
        Expr acc = parseTerm();
        if (neg) acc = -acc;
        for (;;) {
            if (accept("+")) acc += parseTerm();
            else if (accept("-")) acc -= parseTerm();
            else return acc;
        }
    }

    Expr parseTerm() {
        Expr acc = parseFactor();
        for (;;) {
            if (accept("*")) {
                acc = acc * parseFactor();
            } else if (accept("/")) {
                Token t = peek();
                Expr div = parseFactor();
                auto c = div.as_coefficient();
                if (!c || c->is_zero()) fail("can only divide by nonzero constants", t);
                acc = acc * (Coefficient::one() / *c);
            } else {
                return acc;
            }
        }
    }

    long long parseSignedInt() {
        bool neg = accept("-");
        Token t = take();
        if (t.kind != Token::Int) fail("expected integer", t);
        return neg ? -t.value : t.value;
    }

    Expr applyPower(Expr base, const Token& where) {
        if (!accept("^")) return base;
        long long e = parseSignedInt();
        auto c = base.as_coefficient();
        if (!c || c->is_zero()) fail("exponent applies to constants only", where);
        Coefficient r = Coefficient::one();
        Coefficient inv = Coefficient::one() / *c;
        for (long long k = 0; k < (e < 0 ? -e : e); ++k) r = r * (e < 0 ? inv : *c);
        return Expr::constant(r);
    }

    Expr parseFactor() {
        Token t = peek();
        if (t.kind == Token::Int) {
            take();
            return applyPower(Expr::constant(Rational(t.value)), t);
        }
        if (accept("(")) {
            Expr e = parseExpr();
            expect(")");
            return e;
        }
        if (t.kind != Token::Ident) fail("expected factor", t);

        if (acceptIdent("dt")) {
            expect("(");
            Expr e = parseExpr();
            expect(")");
            return time_derivative(e);
        }
        if (peek().text == "d" && peek(1).kind == Token::Punct && peek(1).text == "[") {
            take();
            Idx dir = (expect("["), parseIndex());
            expect("]");
            expect("(");
            Expr e = parseExpr();
            expect(")");
            return spatial_derivative(e, dir, Pt::X);
        }
        if (acceptIdent("eps")) {
            auto v = parseIndexList();
            if (v.size() != 3) fail("eps takes three indices", t);
            return Expr::atom(Atom::epsilon(v[0], v[1], v[2]));
        }
        if (acceptIdent("delta")) {
            auto v = parseIndexList();
            if (v.size() != 2) fail("delta takes two indices", t);
            return Expr::atom(Atom::kronecker(v[0], v[1]));
        }
        if (allowKernels && acceptIdent("dirac")) {
            expect("(");
            Pt a = parsePoint();
            expect(",");
            Pt b = parsePoint();
            expect(")");
            return Expr::atom(Atom::delta(a, b));
        }

        std::string name = expectIdent();
        bool momentum = false;
        std::string fieldName = name;
        if (name.rfind("Pi_", 0) == 0 && model.field(name.substr(3))) {
            momentum = true;
            fieldName = name.substr(3);
        }
        if (const FieldDecl* f = model.field(fieldName)) {
            std::vector<Idx> idx;
            if (f->rank > 0) {
                idx = parseIndexList();
                if ((int)idx.size() != f->rank) fail("wrong index count for " + name, t);
            }
            Atom a = momentum ? Atom::momentum(fieldName, idx) : Atom::field(fieldName, idx);
            if (allowKernels && accept("@")) a.pt = parsePoint();
            return Expr::atom(a);
        }
        if (isConstant(name))
            return applyPower(Expr::constant(Coefficient::symbol(name)), t);
        fail("unknown identifier", t);
    }

    void parseModel() {
        if (!acceptIdent("model")) fail("expected 'model'", peek());
        model.name = expectIdent();
        expect("{");
        bool haveDensity = false;
        while (!accept("}")) {
            Token t = peek();
            if (acceptIdent("field")) {
                FieldDecl f;
                f.name = expectIdent();
                if (kReserved.count(f.name) || isConstant(f.name))
                    fail("reserved or duplicate name", t);
                if (model.field(f.name)) fail("duplicate field", t);
                if (!acceptIdent("rank")) fail("expected 'rank'", peek());
                Token r = take();
                if (r.kind != Token::Int || r.value < 0 || r.value > 2)
                    fail("rank must be 0, 1 or 2", r);
                f.rank = (int)r.value;
                if (!acceptIdent("parity")) fail("expected 'parity'", peek());
                if (accept("+")) f.parity = 1;
                else if (accept("-")) f.parity = -1;
                else fail("expected '+' or '-'", peek());
                expect(";");
                model.fields.push_back(std::move(f));
            } else if (acceptIdent("constant")) {
                std::string n = expectIdent();
                if (kReserved.count(n) || model.field(n) || isConstant(n))
                    fail("reserved or duplicate constant", t);
                model.constants.push_back(n);
                expect(";");
            } else if (acceptIdent("density")) {
                expect("=");
                model.density = parseExpr();
                expect(";");
                haveDensity = true;
            } else if (acceptIdent("auxiliary")) {
                model.auxiliaryConditions.push_back(parseExpr());
                expect(";");
            } else {
                fail("expected declaration", t);
            }
        }
        if (peek().kind != Token::End) fail("trailing input", peek());
        if (!haveDensity) throw ValidationError("model has no density");
    }
};

} // namespace

LagrangianModel parse_model(const std::string& source) {
    Parser p(source);
    p.parseModel();
    p.model.validate();
    return std::move(p.model);
}

Expr parse_expression(const std::string& source, const LagrangianModel& ctx) {
    Parser p(source);
    p.model = ctx;
    p.allowKernels = true;
    Expr e = p.parseExpr();
    if (p.peek().kind != Token::End) p.fail("trailing input", p.peek());
    return e;
}

std::string serialize_model(const LagrangianModel& m) {
    std::string s = "model " + m.name + " {\n";
    for (auto& f : m.fields)
        s += "  field " + f.name + " rank " + std::to_string(f.rank) + " parity " +
             (f.parity > 0 ? "+" : "-") + ";\n";
    for (auto& c : m.constants) s += "  constant " + c + ";\n";
    s += "  density = " + m.density.str() + ";\n";
    for (auto& a : m.auxiliaryConditions) s += "  auxiliary " + a.str() + ";\n";
    s += "}\n";
    return s;
}

void LagrangianModel::validate() const {
    for (auto& f : fields)
        if (f.rank < 0 || f.rank > 2)
            throw ValidationError("field rank out of range: " + f.name);
    if (!density.free_indices().empty())
        throw ValidationError("density has free indices");
    for (auto& t : density.terms())
        for (auto& a : t.atoms) {
            if (a.tderivs > 1)
                throw ValidationError("density is not first order in time derivatives");
            if (a.tderivs == 1 && !a.derivs.empty())
                throw ValidationError("spatial derivatives of velocities are unsupported");
            if (a.kind == AtomKind::Field && !field(a.name))
                throw ValidationError("undeclared field " + a.name);
        }
    for (auto& aux : auxiliaryConditions) {
        if (!aux.free_indices().empty())
            throw ValidationError("auxiliary condition has free indices");
        for (auto& t : aux.terms())
            for (auto& a : t.atoms)
                if (a.tderivs > 0)
                    throw ValidationError("auxiliary condition has time derivatives");
    }
}

std::vector<std::vector<Idx>> component_tuples(int rank) {
    std::vector<std::vector<Idx>> out{{}};
    for (int r = 0; r < rank; ++r) {
        std::vector<std::vector<Idx>> next;
        for (auto& t : out)
            for (Idx v = 1; v <= 3; ++v) {
                auto c = t;
                c.push_back(v);
                next.push_back(std::move(c));
            }
        out = std::move(next);
    }
    return out;
}

} // namespace dirac
