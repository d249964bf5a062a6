#pragma once

#include "fuspi/lam/ast.hpp"
#include "fuspi/lla/sequent.hpp"
#include "fuspi/trans/strategy.hpp"

namespace fuspi::trans {

// Modal translation of types. Type variables stand for translated types, so
// they carry arity 2 like every composite produced here.
inline lla::FP tr_type(const lam::TP& t, const Strategy& st) {
    using lam::TKind;
    if (st.simply) {
        switch (t->kind) {
            case TKind::Var: return lla::fvar(t->var);
            case TKind::Arrow:
                return lla::fparr(lla::fquest(lla::dual(tr_type(t->a, st))),
                                  tr_type(t->b, st));
            default:
                fail("the arity translation covers only arrow and variable types");
        }
    }
    switch (t->kind) {
        case TKind::Var: return lla::fvar(t->var);
        case TKind::Arrow:
            return lla::fparr(lla::wrap_word(dual_word(st.gamma), lla::dual(tr_type(t->a, st))),
                              lla::wrap_word(st.delta, tr_type(t->b, st)));
        case TKind::Forall:
            return lla::fquant(lla::FKind::Forall, t->var, tr_type(t->a, st));
        case TKind::Prod:
            return lla::ftensor(lla::wrap_word(st.gamma, tr_type(t->a, st)),
                                lla::wrap_word(st.gamma, tr_type(t->b, st)));
        case TKind::Sum:
            return lla::fplus(lla::fup(lla::wrap_word(st.gamma, tr_type(t->a, st))),
                              lla::fup(lla::wrap_word(st.gamma, tr_type(t->b, st))));
    }
    fail("tr_type: bad type");
}

inline lla::ArityCtx type_arities(const Strategy& st) {
    lla::ArityCtx ctx;
    ctx.fallback = st.simply ? 1 : 2;
    return ctx;
}

// The sequent a translated well-typed term inhabits: one entry per term
// variable, the designated output, then one entry per continuation variable.
inline lla::Sequent build_theorem_sequent(const lam::TypeCtx& ctx, const lam::TP& result,
                                          const lam::TypeCtx& muctx, const Strategy& st,
                                          const Name& u) {
    if (st.simply) fail("the arity translation uses a name vector, not a single output");
    lla::Sequent s;
    for (const auto& [x, ty] : ctx)
        s.entries.push_back(
            {{x}, lla::wrap_word(dual_word(st.gamma), lla::dual(tr_type(ty, st)))});
    s.entries.push_back({{u}, lla::wrap_word(st.delta, tr_type(result, st))});
    for (const auto& [b, ty] : muctx)
        s.entries.push_back({{b}, lla::wrap_word(st.delta, tr_type(ty, st))});
    return s;
}

inline lla::Sequent build_theorem_sequent_simple(const lam::TypeCtx& ctx, const lam::TP& result,
                                                 const Strategy& st, const NameVec& ys) {
    lla::Sequent s;
    for (const auto& [x, ty] : ctx)
        s.entries.push_back({{x}, lla::fquest(lla::dual(tr_type(ty, st)))});
    lla::FP goal = tr_type(result, st);
    if (static_cast<int>(ys.size()) != lla::arity(goal, type_arities(st)))
        fail("output vector size does not match the arity of ", lla::to_string(goal));
    s.entries.push_back({ys, goal});
    return s;
}

}  // namespace fuspi::trans
