#pragma once

#include <optional>

#include "fuspi/common.hpp"
#include "fuspi/pi/parse.hpp"

namespace fuspi::lam {

// --- types -------------------------------------------------------------------

enum class TKind { Var, Arrow, Forall, Prod, Sum };

struct Type;
using TP = std::shared_ptr<const Type>;

struct Type {
    TKind kind;
    Name var;  // Var, Forall binder
    TP a, b;   // Arrow a->b, Prod a*b, Sum a+b, Forall body in a
};

inline TP tvar(Name v) { return std::make_shared<const Type>(Type{TKind::Var, v, nullptr, nullptr}); }
inline TP tarrow(TP a, TP b) { return std::make_shared<const Type>(Type{TKind::Arrow, Name{}, a, b}); }
inline TP tforall(Name v, TP a) { return std::make_shared<const Type>(Type{TKind::Forall, v, a, nullptr}); }
inline TP tprod(TP a, TP b) { return std::make_shared<const Type>(Type{TKind::Prod, Name{}, a, b}); }
inline TP tsum(TP a, TP b) { return std::make_shared<const Type>(Type{TKind::Sum, Name{}, a, b}); }

inline void tfv_into(const TP& t, NameSet& out, NameSet bound) {
    if (!t) return;
    if (t->kind == TKind::Var) {
        if (!bound.count(t->var)) out.insert(t->var);
        return;
    }
    if (t->kind == TKind::Forall) bound.insert(t->var);
    tfv_into(t->a, out, bound);
    tfv_into(t->b, out, bound);
}

inline NameSet tfree_vars(const TP& t) {
    NameSet out;
    tfv_into(t, out, {});
    return out;
}

inline TP tsubst(const TP& t, const Name& x, const TP& s) {
    if (!t) return t;
    switch (t->kind) {
        case TKind::Var: return t->var == x ? s : t;
        case TKind::Forall: {
            if (t->var == x) return t;
            if (tfree_vars(s).count(t->var)) {
                Name f = freshen(t->var);
                return tforall(f, tsubst(tsubst(t->a, t->var, tvar(f)), x, s));
            }
            return tforall(t->var, tsubst(t->a, x, s));
        }
        case TKind::Arrow: return tarrow(tsubst(t->a, x, s), tsubst(t->b, x, s));
        case TKind::Prod: return tprod(tsubst(t->a, x, s), tsubst(t->b, x, s));
        case TKind::Sum: return tsum(tsubst(t->a, x, s), tsubst(t->b, x, s));
    }
    fail("tsubst: bad type");
}

namespace detail {
inline bool talpha(const TP& a, const TP& b, std::map<Name, int>& la, std::map<Name, int>& rb,
                   int depth) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    if (a->kind == TKind::Var) {
        auto ia = la.find(a->var), ib = rb.find(b->var);
        if ((ia == la.end()) != (ib == rb.end())) return false;
        return ia == la.end() ? a->var == b->var : ia->second == ib->second;
    }
    if (a->kind == TKind::Forall) {
        auto sa = la, sb = rb;
        sa[a->var] = depth;
        sb[b->var] = depth;
        return talpha(a->a, b->a, sa, sb, depth + 1);
    }
    return talpha(a->a, b->a, la, rb, depth) && talpha(a->b, b->b, la, rb, depth);
}
}  // namespace detail

inline bool type_equal(const TP& a, const TP& b) {
    std::map<Name, int> la, rb;
    return detail::talpha(a, b, la, rb, 0);
}

inline std::string to_string(const TP& t, int ctx = 0) {
    auto wrap = [&](int prec, const std::string& s) { return prec < ctx ? "(" + s + ")" : s; };
    switch (t->kind) {
        case TKind::Var: return base_spelling(t->var);
        case TKind::Arrow: return wrap(1, to_string(t->a, 2) + " -> " + to_string(t->b, 1));
        case TKind::Forall: return wrap(1, "forall " + base_spelling(t->var) + ". " + to_string(t->a, 1));
        case TKind::Sum: return wrap(2, to_string(t->a, 2) + " + " + to_string(t->b, 3));
        case TKind::Prod: return wrap(3, to_string(t->a, 3) + " * " + to_string(t->b, 4));
    }
    fail("type to_string: bad type");
}

// --- terms -------------------------------------------------------------------

enum class MKind { Var, Lam, App, Mu, TyLam, TyApp, Pair, Let, Inj, Case, Sharp };

struct Term;
using MP = std::shared_ptr<const Term>;

// One node type for the whole calculus. Sharp is a machine-side marker for a
// delayed argument; it has no role in source programs.
struct Term {
    MKind kind;
    Name x;      // Var; Lam binder; Mu binder; TyLam binder; Let first; Case left binder
    Name y;      // Mu named variable; Let second; Case right binder
    TP ty;       // Lam annotation (may be null); Mu annotation (may be null); TyApp argument; Inj other component
    MP m, n, n2; // children
    int idx = 0; // Inj: 1 or 2
};

inline MP node(Term&& t) { return std::make_shared<const Term>(std::move(t)); }

inline MP mvar(Name x) { return node({MKind::Var, x, {}, nullptr, nullptr, nullptr, nullptr, 0}); }
inline MP mlam(Name x, TP ty, MP body) {
    return node({MKind::Lam, x, {}, ty, body, nullptr, nullptr, 0});
}
inline MP mapp(MP f, MP a) { return node({MKind::App, {}, {}, nullptr, f, a, nullptr, 0}); }
inline MP mmu(Name a, Name b, TP ann, MP body) {
    return node({MKind::Mu, a, b, ann, body, nullptr, nullptr, 0});
}
inline MP mtylam(Name x, MP body) { return node({MKind::TyLam, x, {}, nullptr, body, nullptr, nullptr, 0}); }
inline MP mtyapp(MP f, TP ty) { return node({MKind::TyApp, {}, {}, ty, f, nullptr, nullptr, 0}); }
inline MP mpair(MP a, MP b) { return node({MKind::Pair, {}, {}, nullptr, a, b, nullptr, 0}); }
inline MP mlet(Name x, Name y, MP rhs, MP body) {
    return node({MKind::Let, x, y, nullptr, rhs, body, nullptr, 0});
}
inline MP minj(int idx, TP other, MP body) {
    return node({MKind::Inj, {}, {}, other, body, nullptr, nullptr, idx});
}
inline MP mcase(MP scrut, Name x1, MP b1, Name x2, MP b2) {
    return node({MKind::Case, x1, x2, nullptr, scrut, b1, b2, 0});
}
inline MP msharp(MP m) { return node({MKind::Sharp, {}, {}, nullptr, m, nullptr, nullptr, 0}); }

inline void fv_into(const MP& t, NameSet& out, NameSet bound) {
    if (!t) return;
    switch (t->kind) {
        case MKind::Var:
            if (!bound.count(t->x)) out.insert(t->x);
            return;
        case MKind::Lam:
            bound.insert(t->x);
            fv_into(t->m, out, bound);
            return;
        case MKind::Let: {
            fv_into(t->m, out, bound);
            bound.insert(t->x);
            bound.insert(t->y);
            fv_into(t->n, out, bound);
            return;
        }
        case MKind::Case: {
            fv_into(t->m, out, bound);
            NameSet b1 = bound, b2 = bound;
            b1.insert(t->x);
            fv_into(t->n, out, b1);
            b2.insert(t->y);
            fv_into(t->n2, out, b2);
            return;
        }
        default:
            fv_into(t->m, out, bound);
            fv_into(t->n, out, bound);
            fv_into(t->n2, out, bound);
            return;
    }
}

inline NameSet free_vars(const MP& t) {
    NameSet out, bound;
    fv_into(t, out, bound);
    return out;
}

inline void fmv_into(const MP& t, NameSet& out, NameSet& bound) {
    if (!t) return;
    if (t->kind == MKind::Mu) {
        bool had = bound.count(t->x);
        bound.insert(t->x);
        if (!bound.count(t->y)) out.insert(t->y);
        fmv_into(t->m, out, bound);
        if (!had) bound.erase(t->x);
        return;
    }
    fmv_into(t->m, out, bound);
    fmv_into(t->n, out, bound);
    fmv_into(t->n2, out, bound);
}

inline NameSet free_mu_vars(const MP& t) {
    NameSet out, bound;
    fmv_into(t, out, bound);
    return out;
}

inline bool is_value(const MP& t) {
    switch (t->kind) {
        case MKind::Var:
        case MKind::Lam:
        case MKind::TyLam:
        case MKind::Pair:
        case MKind::Inj:
            return true;
        default:
            return false;
    }
}

// Capture-avoiding substitution of terms for lambda variables.
using TermSubst = std::map<Name, MP>;

inline MP substitute(const MP& t, const TermSubst& s);

namespace detail {
inline Name subst_binder(TermSubst& s, const Name& b, bool& changed) {
    s.erase(b);
    NameSet free;
    for (auto& [k, v] : s) {
        NameSet bound;
        fv_into(v, free, bound);
    }
    if (free.count(b)) {
        Name f = freshen(b);
        s[b] = mvar(f);
        changed = true;
        return f;
    }
    return b;
}
}  // namespace detail

inline MP substitute(const MP& t, const TermSubst& s0) {
    if (!t || s0.empty()) return t;
    switch (t->kind) {
        case MKind::Var: {
            auto it = s0.find(t->x);
            return it == s0.end() ? t : it->second;
        }
        case MKind::Lam: {
            TermSubst s = s0;
            bool ch = false;
            Name b = detail::subst_binder(s, t->x, ch);
            return mlam(b, t->ty, substitute(t->m, s));
        }
        case MKind::Let: {
            MP rhs = substitute(t->m, s0);
            TermSubst s = s0;
            bool ch = false;
            Name bx = detail::subst_binder(s, t->x, ch);
            Name by = detail::subst_binder(s, t->y, ch);
            return mlet(bx, by, rhs, substitute(t->n, s));
        }
        case MKind::Case: {
            MP sc = substitute(t->m, s0);
            TermSubst s1 = s0, s2 = s0;
            bool ch = false;
            Name b1 = detail::subst_binder(s1, t->x, ch);
            Name b2 = detail::subst_binder(s2, t->y, ch);
            return mcase(sc, b1, substitute(t->n, s1), b2, substitute(t->n2, s2));
        }
        case MKind::App: return mapp(substitute(t->m, s0), substitute(t->n, s0));
        case MKind::Mu: return mmu(t->x, t->y, t->ty, substitute(t->m, s0));
        case MKind::TyLam: return mtylam(t->x, substitute(t->m, s0));
        case MKind::TyApp: return mtyapp(substitute(t->m, s0), t->ty);
        case MKind::Pair: return mpair(substitute(t->m, s0), substitute(t->n, s0));
        case MKind::Inj: return minj(t->idx, t->ty, substitute(t->m, s0));
        case MKind::Sharp: return msharp(substitute(t->m, s0));
    }
    fail("substitute: bad term");
}

// Freshens every term-level binder so later graft operations cannot capture.
inline MP rename_apart(const MP& t, TermSubst s = {}, std::map<Name, Name> mu = {}) {
    if (!t) return t;
    auto fresh_bind = [&](TermSubst& s2, const Name& b) {
        Name f = freshen(b);
        s2[b] = mvar(f);
        return f;
    };
    switch (t->kind) {
        case MKind::Var: {
            auto it = s.find(t->x);
            return it == s.end() ? t : it->second;
        }
        case MKind::Lam: {
            TermSubst s2 = s;
            Name f = fresh_bind(s2, t->x);
            return mlam(f, t->ty, rename_apart(t->m, s2, mu));
        }
        case MKind::Mu: {
            auto mu2 = mu;
            Name f = freshen(t->x);
            mu2[t->x] = f;
            Name named = t->y;
            auto it = mu2.find(named);
            if (it != mu2.end()) named = it->second;
            return mmu(f, named, t->ty, rename_apart(t->m, s, mu2));
        }
        case MKind::Let: {
            MP rhs = rename_apart(t->m, s, mu);
            TermSubst s2 = s;
            Name fx = fresh_bind(s2, t->x);
            Name fy = fresh_bind(s2, t->y);
            return mlet(fx, fy, rhs, rename_apart(t->n, s2, mu));
        }
        case MKind::Case: {
            MP sc = rename_apart(t->m, s, mu);
            TermSubst s1 = s, s2 = s;
            Name f1 = fresh_bind(s1, t->x);
            Name f2 = fresh_bind(s2, t->y);
            return mcase(sc, f1, rename_apart(t->n, s1, mu), f2, rename_apart(t->n2, s2, mu));
        }
        case MKind::App: return mapp(rename_apart(t->m, s, mu), rename_apart(t->n, s, mu));
        case MKind::TyLam: return mtylam(t->x, rename_apart(t->m, s, mu));
        case MKind::TyApp: return mtyapp(rename_apart(t->m, s, mu), t->ty);
        case MKind::Pair: return mpair(rename_apart(t->m, s, mu), rename_apart(t->n, s, mu));
        case MKind::Inj: return minj(t->idx, t->ty, rename_apart(t->m, s, mu));
        case MKind::Sharp: return msharp(rename_apart(t->m, s, mu));
    }
    fail("rename_apart: bad term");
}

namespace detail {
struct AEnv {
    std::map<Name, int> l, r;
    int depth = 0;
};

inline bool aeq_name(const Name& a, const Name& b, const AEnv& e) {
    auto ia = e.l.find(a), ib = e.r.find(b);
    if ((ia == e.l.end()) != (ib == e.r.end())) return false;
    return ia == e.l.end() ? a == b : ia->second == ib->second;
}

inline bool aeq(const MP& a, const MP& b, AEnv el, AEnv em, AEnv et) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind || a->idx != b->idx) return false;
    auto types_ok = [&](const TP& x, const TP& y) {
        if (!x || !y) return !x && !y;
        auto tl = et.l, tr = et.r;
        return talpha(x, y, tl, tr, et.depth);
    };
    auto bind = [&](AEnv& e, const Name& x, const Name& y) {
        e.l[x] = e.depth;
        e.r[y] = e.depth;
        ++e.depth;
    };
    switch (a->kind) {
        case MKind::Var: return aeq_name(a->x, b->x, el);
        case MKind::Lam: {
            if (!types_ok(a->ty, b->ty)) return false;
            bind(el, a->x, b->x);
            return aeq(a->m, b->m, el, em, et);
        }
        case MKind::Mu: {
            if (!types_ok(a->ty, b->ty)) return false;
            AEnv em2 = em;
            bind(em2, a->x, b->x);
            if (!aeq_name(a->y, b->y, em2)) return false;
            return aeq(a->m, b->m, el, em2, et);
        }
        case MKind::Let: {
            if (!aeq(a->m, b->m, el, em, et)) return false;
            bind(el, a->x, b->x);
            bind(el, a->y, b->y);
            return aeq(a->n, b->n, el, em, et);
        }
        case MKind::Case: {
            if (!aeq(a->m, b->m, el, em, et)) return false;
            AEnv e1 = el, e2 = el;
            bind(e1, a->x, b->x);
            bind(e2, a->y, b->y);
            return aeq(a->n, b->n, e1, em, et) && aeq(a->n2, b->n2, e2, em, et);
        }
        case MKind::TyLam: {
            AEnv et2 = et;
            bind(et2, a->x, b->x);
            return aeq(a->m, b->m, el, em, et2);
        }
        case MKind::TyApp:
        case MKind::Inj:
            return types_ok(a->ty, b->ty) && aeq(a->m, b->m, el, em, et);
        default:
            return aeq(a->m, b->m, el, em, et) && aeq(a->n, b->n, el, em, et) &&
                   aeq(a->n2, b->n2, el, em, et);
    }
}
}  // namespace detail

inline bool alpha_equal(const MP& a, const MP& b) { return detail::aeq(a, b, {}, {}, {}); }

// --- textual syntax ----------------------------------------------------------

inline std::string to_string(const MP& t, int ctx = 0);

inline std::string binder_str(const Name& n) { return base_spelling(n); }

inline std::string to_string(const MP& t, int ctx) {
    auto wrap = [&](int prec, const std::string& s) { return prec < ctx ? "(" + s + ")" : s; };
    switch (t->kind) {
        case MKind::Var: return base_spelling(t->x);
        case MKind::Lam: {
            std::string ann = t->ty ? ":" + to_string(t->ty) : "";
            return wrap(1, "\\" + binder_str(t->x) + ann + ". " + to_string(t->m, 1));
        }
        case MKind::App: return wrap(2, to_string(t->m, 2) + " " + to_string(t->n, 3));
        case MKind::Mu: {
            std::string ann = t->ty ? ":" + to_string(t->ty) : "";
            return wrap(1, "mu " + binder_str(t->x) + ann + ".[" + binder_str(t->y) + "] " +
                               to_string(t->m, 1));
        }
        case MKind::TyLam: return wrap(1, "/\\" + base_spelling(t->x) + ". " + to_string(t->m, 1));
        case MKind::TyApp: return wrap(2, to_string(t->m, 2) + " [" + to_string(t->ty) + "]");
        case MKind::Pair: return "(" + to_string(t->m, 1) + ", " + to_string(t->n, 1) + ")";
        case MKind::Let:
            return wrap(1, "let (" + binder_str(t->x) + ", " + binder_str(t->y) + ") = " +
                               to_string(t->m, 2) + " in " + to_string(t->n, 1));
        case MKind::Inj:
            return wrap(2, std::string(t->idx == 1 ? "inl" : "inr") + "[" + to_string(t->ty) +
                               "] " + to_string(t->m, 3));
        case MKind::Case:
            return wrap(1, "case " + to_string(t->m, 2) + " of inl " + binder_str(t->x) + ". " +
                               to_string(t->n, 2) + " | inr " + binder_str(t->y) + ". " +
                               to_string(t->n2, 2));
        case MKind::Sharp: return wrap(2, "$" + to_string(t->m, 3));
    }
    fail("term to_string: bad term");
}

namespace detail {

inline bool reserved_word(const std::string& w) {
    return w == "mu" || w == "let" || w == "case" || w == "of" || w == "in" || w == "inl" ||
           w == "inr" || w == "forall";
}

struct TermParser {
    Lexer lx;
    explicit TermParser(const std::string& s) : lx(s) {}

    TP type_atom() {
        if (lx.lookahead("(")) {
            lx.expect("(");
            TP t = type();
            lx.expect(")");
            return t;
        }
        return tvar(mkname(lx.ident()));
    }

    TP type_prod() {
        TP t = type_atom();
        while (lx.lookahead("*")) {
            lx.expect("*");
            t = tprod(t, type_atom());
        }
        return t;
    }

    TP type_sum() {
        TP t = type_prod();
        while (lx.lookahead("+")) {
            lx.expect("+");
            t = tsum(t, type_prod());
        }
        return t;
    }

    TP type() {
        if (lx.word_ahead() == "forall") {
            lx.ident();
            Name v = mkname(lx.ident());
            lx.expect(".");
            return tforall(v, type());
        }
        TP t = type_sum();
        if (lx.lookahead("->")) {
            lx.expect("->");
            return tarrow(t, type());
        }
        return t;
    }

    bool atom_ahead() {
        if (lx.lookahead("(") || lx.lookahead("$")) return true;
        if (lx.word_ahead() == "inl" || lx.word_ahead() == "inr") return true;
        std::string w = lx.word_ahead();
        return !w.empty() && !reserved_word(w);
    }

    MP atom() {
        if (lx.lookahead("$")) {
            lx.expect("$");
            return msharp(atom());
        }
        if (lx.word_ahead() == "inl" || lx.word_ahead() == "inr") {
            int idx = lx.word_ahead() == "inl" ? 1 : 2;
            lx.ident();
            lx.expect("[");
            TP other = type();
            lx.expect("]");
            return minj(idx, other, atom());
        }
        if (lx.lookahead("(")) {
            lx.expect("(");
            MP t = term();
            if (lx.lookahead(",")) {
                lx.expect(",");
                MP s = term();
                lx.expect(")");
                return mpair(t, s);
            }
            lx.expect(")");
            return t;
        }
        std::string w = lx.ident();
        if (reserved_word(w)) fail("unexpected keyword '", w, "'");
        return mvar(mkname(w));
    }

    MP app() {
        MP t = atom();
        for (;;) {
            if (lx.lookahead("[")) {
                lx.expect("[");
                TP ty = type();
                lx.expect("]");
                t = mtyapp(t, ty);
                continue;
            }
            if (atom_ahead()) {
                t = mapp(t, atom());
                continue;
            }
            return t;
        }
    }

    MP term() {
        if (lx.lookahead("\\")) {
            lx.expect("\\");
            Name x = mkname(lx.ident());
            TP ty = nullptr;
            if (lx.lookahead(":")) {
                lx.expect(":");
                ty = type();
            }
            lx.expect(".");
            return mlam(x, ty, term());
        }
        if (lx.lookahead("/\\")) {
            lx.expect("/\\");
            Name x = mkname(lx.ident());
            lx.expect(".");
            return mtylam(x, term());
        }
        if (lx.word_ahead() == "mu") {
            lx.ident();
            Name a = mkname(lx.ident());
            TP ann = nullptr;
            if (lx.lookahead(":")) {
                lx.expect(":");
                ann = type();
            }
            lx.expect(".");
            lx.expect("[");
            Name b = mkname(lx.ident());
            lx.expect("]");
            return mmu(a, b, ann, term());
        }
        if (lx.word_ahead() == "let") {
            lx.ident();
            lx.expect("(");
            Name x = mkname(lx.ident());
            lx.expect(",");
            Name y = mkname(lx.ident());
            lx.expect(")");
            lx.expect("=");
            MP rhs = term();
            if (lx.word_ahead() != "in") fail("expected 'in' after the let right-hand side");
            lx.ident();
            return mlet(x, y, rhs, term());
        }
        if (lx.word_ahead() == "case") {
            lx.ident();
            MP sc = term();
            if (lx.word_ahead() != "of") fail("expected 'of' in case");
            lx.ident();
            if (lx.word_ahead() != "inl") fail("expected 'inl' branch");
            lx.ident();
            Name x1 = mkname(lx.ident());
            lx.expect(".");
            MP b1 = term();
            lx.expect("|");
            if (lx.word_ahead() != "inr") fail("expected 'inr' branch");
            lx.ident();
            Name x2 = mkname(lx.ident());
            lx.expect(".");
            MP b2 = term();
            return mcase(sc, x1, b1, x2, b2);
        }
        return app();
    }
};

}  // namespace detail

inline MP parse_term(const std::string& s) {
    detail::TermParser p(s);
    MP t = p.term();
    p.lx.end();
    return t;
}

inline TP parse_type(const std::string& s) {
    detail::TermParser p(s);
    TP t = p.type();
    p.lx.end();
    return t;
}

// --- typechecking ------------------------------------------------------------

using TypeCtx = std::vector<std::pair<Name, TP>>;

namespace detail {

struct Checker {
    std::map<Name, TP> lam;
    std::map<Name, TP> mu;  // a null mapped type means "not yet inferred"

    TP check(const MP& t) {
        switch (t->kind) {
            case MKind::Var: {
                auto it = lam.find(t->x);
                if (it == lam.end()) fail("unbound variable ", base_spelling(t->x));
                return it->second;
            }
            case MKind::Lam: {
                if (!t->ty) fail("missing annotation on \\", base_spelling(t->x));
                if (mu.count(t->x))
                    fail("binder ", base_spelling(t->x), " is already a mu-variable");
                auto saved = save_lam(t->x, t->ty);
                TP b = check(t->m);
                restore_lam(t->x, saved);
                return tarrow(t->ty, b);
            }
            case MKind::App: {
                TP f = check(t->m);
                if (f->kind != TKind::Arrow)
                    fail("applied a term of non-function type ", to_string(f));
                TP a = check(t->n);
                if (!type_equal(f->a, a))
                    fail("argument type mismatch: expected ", to_string(f->a), ", got ",
                         to_string(a));
                return f->b;
            }
            case MKind::Mu: {
                if (lam.count(t->x))
                    fail("mu binder ", base_spelling(t->x), " is already a term variable");
                auto saved = save_mu(t->x, t->ty);
                TP b = check(t->m);
                Name named = t->y;
                auto it = mu.find(named);
                if (it == mu.end()) fail("unbound mu-variable ", base_spelling(named));
                if (!it->second) {
                    it->second = b;
                } else if (!type_equal(it->second, b)) {
                    fail("mu-variable ", base_spelling(named), " expects ",
                         to_string(it->second), ", got ", to_string(b));
                }
                TP res = mu[t->x];
                restore_mu(t->x, saved);
                if (!res)
                    fail("cannot infer the type of mu ", base_spelling(t->x),
                         "; annotate it as mu ", base_spelling(t->x), ":A.[...]");
                return res;
            }
            case MKind::TyLam: {
                for (auto& [n, ty] : lam)
                    if (tfree_vars(ty).count(t->x))
                        fail("type variable ", base_spelling(t->x), " occurs free in the context");
                for (auto& [n, ty] : mu)
                    if (ty && tfree_vars(ty).count(t->x))
                        fail("type variable ", base_spelling(t->x), " occurs free in the context");
                return tforall(t->x, check(t->m));
            }
            case MKind::TyApp: {
                TP f = check(t->m);
                if (f->kind != TKind::Forall)
                    fail("type application of a non-polymorphic term of type ", to_string(f));
                return tsubst(f->a, f->var, t->ty);
            }
            case MKind::Pair: return tprod(check(t->m), check(t->n));
            case MKind::Let: {
                TP p = check(t->m);
                if (p->kind != TKind::Prod)
                    fail("let pattern applied to non-pair type ", to_string(p));
                if (t->x == t->y) fail("let binders must be distinct");
                auto sx = save_lam(t->x, p->a);
                auto sy = save_lam(t->y, p->b);
                TP b = check(t->n);
                restore_lam(t->y, sy);
                restore_lam(t->x, sx);
                return b;
            }
            case MKind::Inj: {
                TP a = check(t->m);
                return t->idx == 1 ? tsum(a, t->ty) : tsum(t->ty, a);
            }
            case MKind::Case: {
                TP s = check(t->m);
                if (s->kind != TKind::Sum) fail("case scrutinee has non-sum type ", to_string(s));
                auto s1 = save_lam(t->x, s->a);
                TP c1 = check(t->n);
                restore_lam(t->x, s1);
                auto s2 = save_lam(t->y, s->b);
                TP c2 = check(t->n2);
                restore_lam(t->y, s2);
                if (!type_equal(c1, c2))
                    fail("case branches disagree: ", to_string(c1), " vs ", to_string(c2));
                return c1;
            }
            case MKind::Sharp: return check(t->m);
        }
        fail("typecheck: bad term");
    }

    std::optional<TP> save_lam(const Name& x, TP ty) {
        std::optional<TP> old;
        auto it = lam.find(x);
        if (it != lam.end()) old = it->second;
        lam[x] = ty;
        return old;
    }
    void restore_lam(const Name& x, const std::optional<TP>& old) {
        if (old) lam[x] = *old;
        else lam.erase(x);
    }
    std::optional<TP> save_mu(const Name& x, TP ty) {
        std::optional<TP> old;
        auto it = mu.find(x);
        if (it != mu.end()) old = it->second;
        mu[x] = ty;
        return old;
    }
    void restore_mu(const Name& x, const std::optional<TP>& old) {
        if (old) mu[x] = *old;
        else mu.erase(x);
    }
};

}  // namespace detail

inline TP typecheck(const MP& t, const TypeCtx& ctx = {}, const TypeCtx& muctx = {}) {
    detail::Checker c;
    for (auto& [n, ty] : ctx) c.lam[n] = ty;
    for (auto& [n, ty] : muctx) c.mu[n] = ty;
    return c.check(t);
}

// Counts uses of each mu binder: the named position [a] plus inner references.
// Intuitionistic strategies need every binder used exactly once and no
// mu-variable crossing a lambda or an of-course protocol site.
inline void mu_use_count(const MP& t, const Name& a, int& count) {
    if (!t) return;
    if (t->kind == MKind::Mu) {
        if (t->y == a) ++count;
        if (t->x == a) return;  // shadowed below
        mu_use_count(t->m, a, count);
        return;
    }
    mu_use_count(t->m, a, count);
    mu_use_count(t->n, a, count);
    mu_use_count(t->n2, a, count);
}

inline bool mu_linear(const MP& t) {
    if (!t) return true;
    if (t->kind == MKind::Mu) {
        int uses = t->y == t->x ? 1 : 0;
        mu_use_count(t->m, t->x, uses);
        if (uses != 1) return false;
    }
    return mu_linear(t->m) && mu_linear(t->n) && mu_linear(t->n2);
}

}  // namespace fuspi::lam
