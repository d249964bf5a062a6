#pragma once

#include <string>

#include "fuspi/lam/ast.hpp"
#include "fuspi/trans/strategy.hpp"

// Which strategies can faithfully translate a given term. Each rule records a
// structural reason a clause of the translation would go wrong, so the
// predicate doubles as documentation for the corpus strategy lists.

namespace fuspi::verify {

namespace detail {

inline bool only_pure_nodes(const lam::MP& t) {
    using lam::MKind;
    if (!t) return true;
    switch (t->kind) {
        case MKind::Var:
        case MKind::Lam:
        case MKind::App:
            return only_pure_nodes(t->m) && only_pure_nodes(t->n);
        default:
            return false;
    }
}

inline bool has_kind(const lam::MP& t, lam::MKind k) {
    if (!t) return false;
    if (t->kind == k) return true;
    return has_kind(t->m, k) || has_kind(t->n, k) || has_kind(t->n2, k);
}

inline bool has_any_kind(const lam::MP& t, std::initializer_list<lam::MKind> ks) {
    for (auto k : ks)
        if (has_kind(t, k)) return true;
    return false;
}

// An application whose halves are both reducible gives the process two live
// redexes at once; by-value evaluation without an access prefix has no
// protocol step forcing the argument to win that race.
inline bool has_parallel_redex(const lam::MP& t) {
    using lam::MKind;
    if (!t) return false;
    if (t->kind == MKind::App && !lam::is_value(t->m) && !lam::is_value(t->n)) return true;
    return has_parallel_redex(t->m) || has_parallel_redex(t->n) ||
           has_parallel_redex(t->n2);
}

// Pair and injection components the by-value machine would substitute as-is.
// A value component translates to an input-guarded server, which distributes
// over its use sites; a reducible component would run once on the process
// side but once per site on the machine side.
inline bool has_reducible_component(const lam::MP& t) {
    using lam::MKind;
    if (!t) return false;
    if (t->kind == MKind::Pair && (!lam::is_value(t->m) || !lam::is_value(t->n))) return true;
    if (t->kind == MKind::Inj && !lam::is_value(t->m)) return true;
    return has_reducible_component(t->m) || has_reducible_component(t->n) ||
           has_reducible_component(t->n2);
}

}  // namespace detail

inline bool strategy_applicable(const lam::MP& t, const lam::TypeCtx& muctx,
                                const trans::Strategy& st, std::string* why = nullptr) {
    using lam::MKind;
    auto reject = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (st.simply) {
        if (!muctx.empty()) return reject("the arity translation has no continuation channels");
        if (!detail::only_pure_nodes(t))
            return reject("the arity translation covers only variables, lambdas and applications");
        return true;
    }
    if (!trans::call_by_name(st) && detail::has_kind(t, MKind::Sharp))
        return reject("suspension markers only mean something when arguments wait in servers");
    if (st.classical && !trans::call_by_name(st) &&
        detail::has_any_kind(t, {MKind::Pair, MKind::Let, MKind::Inj, MKind::Case}))
        return reject("stored pair components would run the term protocol where a value is read");
    if (!st.classical) {
        // Linearity makes every jump consume exactly one binder from its own
        // scope chain, so on finite terms each mu must target itself and the
        // ambient continuation channels are left untouched.
        if (!lam::mu_linear(t))
            return reject("a jump channel is dropped or copied, but every channel here is linear");
        for (const auto& [a, ty] : muctx) {
            int uses = 0;
            lam::mu_use_count(t, a, uses);
            if (uses != 1)
                return reject("a continuation channel from the context is not used exactly once");
        }
        if (!trans::call_by_name(st)) {
            if (detail::has_parallel_redex(t))
                return reject("two live redexes race without an access prefix to order them");
            if (detail::has_reducible_component(t))
                return reject("a stored component would be copied unevaluated at split time");
        }
    }
    return true;
}

}  // namespace fuspi::verify
