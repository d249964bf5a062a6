#pragma once

#include "fuspi/lam/ast.hpp"
#include "fuspi/trans/proto.hpp"
#include "fuspi/trans/types.hpp"

namespace fuspi::trans {

namespace detail {

struct Translator {
    const Strategy& st;
    std::map<Name, Name> mu;  // mu binder -> channel carrying its continuation

    Name chan(const Name& b) const {
        auto it = mu.find(b);
        return it == mu.end() ? b : it->second;
    }

    pi::PP var_clause(const Name& x, const Name& u) const {
        if (st.gamma == st.delta) return pi::fuse(u, x);
        if (!st.delta_c.empty()) return co(dual_word(st.delta_c), x, {Slot{u}});
        return co(st.gamma_c, u, {Slot{x}});
    }

    // The argument side of an application: a server for N rooted at z.
    pi::PP arg_server(const lam::MP& n, const Name& z) {
        Name w = fresh("w");
        return proto(st.delta_c, z, {w}, tr(n, w));
    }

    pi::PP tr(const lam::MP& t, Name u) {
        using lam::MKind;
        switch (t->kind) {
            case MKind::Var: return var_clause(t->x, u);
            case MKind::Lam: {
                Name v = fresh("v");
                return proto(st.delta, u, {t->x, v}, tr(t->m, v));
            }
            case MKind::App: {
                Name v = fresh("v");
                if (inline_application(st)) {
                    Slot arg{std::function<pi::PP(Name)>(
                        [&](Name z) { return arg_server(t->n, z); })};
                    return pi::nu(v, pi::par(tr(t->m, v),
                                             co(dual_word(st.delta), v, {arg, Slot{u}})));
                }
                Name z = fresh("z"), x = fresh("x");
                pi::PP consumer =
                    pi::nu(v, pi::par(tr(t->m, v), co(dual_word(st.delta), v, {Slot{x}, Slot{u}})));
                pi::PP left = proto(dual_word(st.gamma_c), z, {x}, consumer);
                return pi::nu(z, pi::par(left, arg_server(t->n, z)));
            }
            case MKind::Mu: {
                std::optional<Name> saved;
                auto it = mu.find(t->x);
                if (it != mu.end()) saved = it->second;
                mu[t->x] = u;
                Name target = chan(t->y);
                pi::PP r = tr(t->m, target);
                if (saved) mu[t->x] = *saved;
                else mu.erase(t->x);
                return r;
            }
            case MKind::TyLam:
            case MKind::TyApp:
                return tr(t->m, u);
            case MKind::Pair: {
                Name x = fresh("x"), y = fresh("y"), v = fresh("v"), w = fresh("w");
                return proto(st.delta, u, {x, y},
                             pi::par(proto(st.delta_c, x, {v}, tr(t->m, v)),
                                     proto(st.delta_c, y, {w}, tr(t->n, w))));
            }
            case MKind::Let: {
                Name v = fresh("v");
                return pi::nu(v, pi::par(tr(t->m, v), proto(dual_word(st.delta), v,
                                                            {t->x, t->y}, tr(t->n, u))));
            }
            case MKind::Inj: {
                Name a1 = fresh("a"), a2 = fresh("a"), v = fresh("v");
                Name ai = t->idx == 1 ? a1 : a2;
                return proto(st.delta, u, {a1, a2},
                             proto("^" + st.delta_c, ai, {v}, tr(t->m, v)));
            }
            case MKind::Case: {
                Name v = fresh("v"), a = fresh("a"), b = fresh("b");
                std::vector<pi::Branch> brs;
                brs.push_back({pi::Action{true, a, {t->x}}, tr(t->n, u)});
                brs.push_back({pi::Action{true, b, {t->y}}, tr(t->n2, u)});
                return pi::nu(v, pi::par(tr(t->m, v), proto(dual_word(st.delta), v, {a, b},
                                                            pi::choice(std::move(brs)))));
            }
            case MKind::Sharp: {
                // A delayed argument standing where a variable was: the
                // variable clause next to a private server for the term.
                Name x = fresh("x");
                return pi::nu(x, pi::par(var_clause(x, u), arg_server(t->m, x)));
            }
        }
        fail("translate: bad term");
    }
};

}  // namespace detail

// Translates a term to a process whose designated channel is u. Free mu
// variables become channels of the same name.
inline pi::PP translate(const lam::MP& term, const Strategy& st, const Name& u) {
    if (st.simply) fail("the arity translation needs a name vector; use translate_simple");
    detail::Translator tr{st, {}};
    return tr.tr(lam::rename_apart(term), u);
}

namespace detail {

struct SimpleTranslator {
    lam::TypeCtx ctx;

    lam::TP type_of(const lam::MP& t) const { return lam::typecheck(t, ctx); }

    pi::PP tr(const lam::MP& t, const NameVec& ys) {
        using lam::MKind;
        switch (t->kind) {
            case MKind::Var: return pi::macro_out(t->x, ys);
            case MKind::Lam: {
                if (ys.empty()) fail("arity translation: output vector exhausted");
                Name y0 = ys[0];
                ctx.push_back({y0, t->ty});
                pi::PP r = tr(lam::substitute(t->m, {{t->x, lam::mvar(y0)}}),
                              NameVec(ys.begin() + 1, ys.end()));
                ctx.pop_back();
                return r;
            }
            case MKind::App: {
                lam::TP a = type_of(t->n);
                int n = lla::arity(tr_type(a, strategy_named("simply")),
                                   lla::ArityCtx{1, {}});
                Name x = fresh("x");
                NameVec zs;
                for (int i = 0; i < n; ++i) zs.push_back(fresh("z"));
                NameVec xys{x};
                xys.insert(xys.end(), ys.begin(), ys.end());
                return pi::nu(x, pi::par(tr(t->m, xys),
                                         pi::repl(pi::Action{true, x, zs}, tr(t->n, zs))));
            }
            default:
                fail("the arity translation covers only variables, abstraction and application");
        }
    }
};

}  // namespace detail

// Arity-directed translation of the simply typed fragment: the process speaks
// on a vector of names, one per arity slot of the translated type.
inline pi::PP translate_simple(const lam::MP& term, const lam::TypeCtx& ctx, const NameVec& ys) {
    detail::SimpleTranslator tr{ctx};
    return tr.tr(lam::rename_apart(term), ys);
}

}  // namespace fuspi::trans
