#pragma once

#include "fuspi/common.hpp"
#include "fuspi/pi/parse.hpp"

namespace fuspi::lla {

// Formulas in negation normal form: negation occurs on variables only, the
// involution is computed by dual().
enum class FKind { Var, NegVar, Tensor, Parr, Down, Up, Bang, Quest, Forall, Exists, Plus, With };

struct Formula;
using FP = std::shared_ptr<const Formula>;

struct Formula {
    FKind kind;
    Name var;       // Var, NegVar, and the binder of Forall/Exists
    FP left, right; // binary connectives
    FP sub;         // unary modalities and quantifier bodies
};

inline FP mk(Formula&& f) { return std::make_shared<const Formula>(std::move(f)); }
inline FP fvar(const Name& x) { return mk({FKind::Var, x, nullptr, nullptr, nullptr}); }
inline FP fnegvar(const Name& x) { return mk({FKind::NegVar, x, nullptr, nullptr, nullptr}); }
inline FP fbin(FKind k, FP a, FP b) { return mk({k, {}, a, b, nullptr}); }
inline FP ftensor(FP a, FP b) { return fbin(FKind::Tensor, a, b); }
inline FP fparr(FP a, FP b) { return fbin(FKind::Parr, a, b); }
inline FP fplus(FP a, FP b) { return fbin(FKind::Plus, a, b); }
inline FP fwith(FP a, FP b) { return fbin(FKind::With, a, b); }
inline FP fmod(FKind k, FP a) { return mk({k, {}, nullptr, nullptr, a}); }
inline FP fdown(FP a) { return fmod(FKind::Down, a); }
inline FP fup(FP a) { return fmod(FKind::Up, a); }
inline FP fbang(FP a) { return fmod(FKind::Bang, a); }
inline FP fquest(FP a) { return fmod(FKind::Quest, a); }
inline FP fquant(FKind k, const Name& x, FP a) { return mk({k, x, nullptr, nullptr, a}); }

inline bool is_modal(FKind k) {
    return k == FKind::Down || k == FKind::Up || k == FKind::Bang || k == FKind::Quest;
}
inline bool is_binary(FKind k) {
    return k == FKind::Tensor || k == FKind::Parr || k == FKind::Plus || k == FKind::With;
}
inline bool is_quant(FKind k) { return k == FKind::Forall || k == FKind::Exists; }

inline FP dual(const FP& f) {
    switch (f->kind) {
        case FKind::Var: return fnegvar(f->var);
        case FKind::NegVar: return fvar(f->var);
        case FKind::Tensor: return fparr(dual(f->left), dual(f->right));
        case FKind::Parr: return ftensor(dual(f->left), dual(f->right));
        case FKind::Plus: return fwith(dual(f->left), dual(f->right));
        case FKind::With: return fplus(dual(f->left), dual(f->right));
        case FKind::Down: return fup(dual(f->sub));
        case FKind::Up: return fdown(dual(f->sub));
        case FKind::Bang: return fquest(dual(f->sub));
        case FKind::Quest: return fbang(dual(f->sub));
        case FKind::Forall: return fquant(FKind::Exists, f->var, dual(f->sub));
        case FKind::Exists: return fquant(FKind::Forall, f->var, dual(f->sub));
    }
    fail("dual: bad formula");
}

// Arities of type variables. Translations use a uniform arity, so a fallback
// covers variables without an explicit entry.
struct ArityCtx {
    int fallback = 1;
    std::map<Name, int> per;

    int of(const Name& v) const {
        auto it = per.find(v);
        return it == per.end() ? fallback : it->second;
    }
};

inline int arity(const FP& f, const ArityCtx& ctx) {
    switch (f->kind) {
        case FKind::Var:
        case FKind::NegVar:
            return ctx.of(f->var);
        case FKind::Tensor:
        case FKind::Parr:
        case FKind::Plus:
        case FKind::With:
            return arity(f->left, ctx) + arity(f->right, ctx);
        case FKind::Down:
        case FKind::Up:
        case FKind::Bang:
        case FKind::Quest:
            return 1;
        case FKind::Forall:
        case FKind::Exists:
            return arity(f->sub, ctx);
    }
    fail("arity: bad formula");
}

inline void fv_into(const FP& f, NameSet& out, NameSet bound) {
    switch (f->kind) {
        case FKind::Var:
        case FKind::NegVar:
            if (!bound.count(f->var)) out.insert(f->var);
            return;
        default:
            if (f->left) fv_into(f->left, out, bound);
            if (f->right) fv_into(f->right, out, bound);
            if (is_quant(f->kind)) bound.insert(f->var);
            if (f->sub) fv_into(f->sub, out, bound);
            return;
    }
}

inline NameSet free_vars(const FP& f) {
    NameSet out;
    fv_into(f, out, {});
    return out;
}

// A[B/X]: replaces X by B and ~X by the dual of B, avoiding capture.
inline FP subst(const FP& f, const Name& x, const FP& b) {
    switch (f->kind) {
        case FKind::Var:
            return f->var == x ? b : f;
        case FKind::NegVar:
            return f->var == x ? dual(b) : f;
        case FKind::Tensor:
        case FKind::Parr:
        case FKind::Plus:
        case FKind::With:
            return fbin(f->kind, subst(f->left, x, b), subst(f->right, x, b));
        case FKind::Down:
        case FKind::Up:
        case FKind::Bang:
        case FKind::Quest:
            return fmod(f->kind, subst(f->sub, x, b));
        case FKind::Forall:
        case FKind::Exists: {
            if (f->var == x) return f;
            if (free_vars(b).count(f->var)) {
                Name fresh_var = freshen(f->var);
                FP body = subst(f->sub, f->var, fvar(fresh_var));
                return fquant(f->kind, fresh_var, subst(body, x, b));
            }
            return fquant(f->kind, f->var, subst(f->sub, x, b));
        }
    }
    fail("subst: bad formula");
}

namespace detail {

inline bool alpha_eq(const FP& a, const FP& b, std::map<Name, int>& la, std::map<Name, int>& rb, int depth) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case FKind::Var:
        case FKind::NegVar: {
            auto ia = la.find(a->var);
            auto ib = rb.find(b->var);
            if (ia == la.end() && ib == rb.end()) return a->var == b->var;
            if (ia == la.end() || ib == rb.end()) return false;
            return ia->second == ib->second;
        }
        case FKind::Forall:
        case FKind::Exists: {
            auto la2 = la;
            auto rb2 = rb;
            la2[a->var] = depth;
            rb2[b->var] = depth;
            return alpha_eq(a->sub, b->sub, la2, rb2, depth + 1);
        }
        default:
            if (a->left && !alpha_eq(a->left, b->left, la, rb, depth)) return false;
            if (a->right && !alpha_eq(a->right, b->right, la, rb, depth)) return false;
            if (a->sub && !alpha_eq(a->sub, b->sub, la, rb, depth)) return false;
            return true;
    }
}

}  // namespace detail

inline bool alpha_equal(const FP& a, const FP& b) {
    std::map<Name, int> la, rb;
    return detail::alpha_eq(a, b, la, rb, 0);
}

// Modality words as strings over v ^ ! ? (down, up, bang, quest), written
// with the head letter first.
inline FKind letter_kind(char c) {
    switch (c) {
        case 'v': return FKind::Down;
        case '^': return FKind::Up;
        case '!': return FKind::Bang;
        case '?': return FKind::Quest;
        default: fail("bad modality letter '", std::string(1, c), "'");
    }
}

inline char kind_letter(FKind k) {
    switch (k) {
        case FKind::Down: return 'v';
        case FKind::Up: return '^';
        case FKind::Bang: return '!';
        case FKind::Quest: return '?';
        default: fail("not a modality");
    }
}

inline FP wrap_word(const std::string& w, FP a) {
    for (auto it = w.rbegin(); it != w.rend(); ++it) a = fmod(letter_kind(*it), a);
    return a;
}

inline FP strip_word(const std::string& w, const FP& f0) {
    FP f = f0;
    for (char c : w) {
        if (f->kind != letter_kind(c)) fail("formula does not start with modality word ", w);
        f = f->sub;
    }
    return f;
}

// --- textual syntax ---------------------------------------------------------

inline std::string to_string(const FP& f, int ctx = 0) {
    auto wrap = [&](int prec, const std::string& s) {
        return prec < ctx ? "(" + s + ")" : s;
    };
    switch (f->kind) {
        case FKind::Var:
            return base_spelling(f->var) + (f->var.uid ? "#" + std::to_string(f->var.uid) : "");
        case FKind::NegVar:
            return "~" + to_string(fvar(f->var), 3);
        case FKind::Tensor:
            return wrap(1, to_string(f->left, 2) + " * " + to_string(f->right, 2));
        case FKind::Parr:
            return wrap(1, to_string(f->left, 2) + " $ " + to_string(f->right, 2));
        case FKind::Plus:
            return wrap(1, to_string(f->left, 2) + " (+) " + to_string(f->right, 2));
        case FKind::With:
            return wrap(1, to_string(f->left, 2) + " (&) " + to_string(f->right, 2));
        case FKind::Down:
            return wrap(2, "dn " + to_string(f->sub, 3));
        case FKind::Up:
            return wrap(2, "up " + to_string(f->sub, 3));
        case FKind::Bang:
            return wrap(2, "!" + to_string(f->sub, 3));
        case FKind::Quest:
            return wrap(2, "?" + to_string(f->sub, 3));
        case FKind::Forall:
            return wrap(1, "forall " + base_spelling(f->var) + ". " + to_string(f->sub, 0));
        case FKind::Exists:
            return wrap(1, "exists " + base_spelling(f->var) + ". " + to_string(f->sub, 0));
    }
    fail("to_string: bad formula");
}

namespace detail {

struct FormulaParser {
    Lexer& lx;

    FP primary() {
        if (lx.eat("~")) return fnegvar(mkname(lx.ident()));
        if (lx.eat("(")) {
            FP f = formula();
            lx.expect(")");
            return f;
        }
        if (lx.eat("!")) return fbang(primary());
        if (lx.eat("?")) return fquest(primary());
        std::string w = lx.word_ahead();
        if (w == "dn") {
            lx.eat("dn");
            return fdown(primary());
        }
        if (w == "up") {
            lx.eat("up");
            return fup(primary());
        }
        if (w == "forall" || w == "exists") {
            lx.eat(w);
            Name x = mkname(lx.ident());
            lx.expect(".");
            return fquant(w == "forall" ? FKind::Forall : FKind::Exists, x, formula());
        }
        if (w.empty()) fail("expected formula at: ", lx.rest(24));
        lx.eat(w);
        return fvar(mkname(w));
    }

    FP formula() {
        FP f = primary();
        for (;;) {
            if (lx.eat("(+)")) {
                f = fplus(f, primary());
            } else if (lx.eat("(&)")) {
                f = fwith(f, primary());
            } else if (lx.eat("*")) {
                f = ftensor(f, primary());
            } else if (lx.lookahead("$")) {
                lx.eat("$");
                f = fparr(f, primary());
            } else {
                return f;
            }
        }
    }
};

}  // namespace detail

inline FP parse_formula_at(Lexer& lx) {
    detail::FormulaParser p{lx};
    return p.formula();
}

inline FP parse_formula(const std::string& s) {
    Lexer lx(s);
    FP f = parse_formula_at(lx);
    lx.end();
    return f;
}

}  // namespace fuspi::lla
