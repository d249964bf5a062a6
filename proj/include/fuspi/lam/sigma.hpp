#pragma once

#include <optional>

#include "fuspi/lam/ast.hpp"

namespace fuspi::lam {

// Head form of a pure lambda term: a stack of outer binders, a list of pending
// argument bindings (outermost first), and a head variable applied to a spine.
// Every pure term sigma-converts to exactly one such form once the pending
// order is canonicalized, so comparing head forms decides sigma-equivalence.
struct HeadForm {
    struct Bind {
        Name x;
        TP ty;  // may be null for unannotated terms
    };
    struct Pend {
        Name x;
        TP ty;
        MP arg;
    };
    std::vector<Bind> outer;
    std::vector<Pend> inner;
    Name head;
    std::vector<MP> args;
};

namespace detail {
inline HeadForm head_norm(const MP& t);
}  // namespace detail

inline MP to_term(const HeadForm& h) {
    MP t = mvar(h.head);
    for (const auto& a : h.args) t = mapp(t, a);
    for (auto it = h.inner.rbegin(); it != h.inner.rend(); ++it)
        t = mapp(mlam(it->x, it->ty, t), it->arg);
    for (auto it = h.outer.rbegin(); it != h.outer.rend(); ++it) t = mlam(it->x, it->ty, t);
    return t;
}

namespace detail {

// de Bruijn style serialization of a pure term: keys are equal exactly when
// the terms are alpha equal, as long as bound names are globally distinct.
inline void alpha_key(const MP& t, std::vector<Name>& env, std::string& out) {
    switch (t->kind) {
        case MKind::Var: {
            for (size_t i = env.size(); i-- > 0;) {
                if (env[i] == t->x) {
                    out += 'b';
                    out += std::to_string(env.size() - 1 - i);
                    return;
                }
            }
            out += 'f';
            out += base_spelling(t->x);
            return;
        }
        case MKind::Lam:
            out += 'l';
            if (t->ty) out += to_string(t->ty);
            out += '(';
            env.push_back(t->x);
            alpha_key(t->m, env, out);
            env.pop_back();
            out += ')';
            return;
        case MKind::App:
            out += 'a';
            out += '(';
            alpha_key(t->m, env, out);
            out += ',';
            alpha_key(t->n, env, out);
            out += ')';
            return;
        default:
            fail("head form normalization requires a pure lambda term");
    }
}

inline std::string alpha_key(const MP& t) {
    std::vector<Name> env;
    std::string out;
    alpha_key(t, env, out);
    return out;
}

// Adjacent pending bindings commute whenever the inner argument does not
// mention the outer binder, so decomposition alone fixes the pending order
// only up to those swaps. Enumerate the linearizations of the dependency
// order and keep the one whose rebuilt term serializes least; the key is
// alpha invariant, so equivalent terms land on alpha equal forms. The
// enumeration is budgeted; a term with enough independent pendings to blow
// the budget keeps its insertion order.
inline void canonicalize_pendings(HeadForm& h) {
    size_t n = h.inner.size();
    if (n < 2) return;
    std::vector<std::vector<bool>> before(n, std::vector<bool>(n, false));
    for (size_t j = 0; j < n; ++j) {
        NameSet fv = free_vars(h.inner[j].arg);
        for (size_t i = 0; i < n; ++i)
            if (i != j && fv.count(h.inner[i].x)) before[i][j] = true;
    }
    std::vector<size_t> order, best;
    std::string best_key;
    std::vector<bool> used(n, false);
    long budget = 20000;
    auto rec = [&](auto&& self) -> void {
        if (budget <= 0) return;
        if (order.size() == n) {
            --budget;
            HeadForm cand = h;
            for (size_t k = 0; k < n; ++k) cand.inner[k] = h.inner[order[k]];
            std::string key = alpha_key(to_term(cand));
            if (best.empty() || key < best_key) {
                best = order;
                best_key = key;
            }
            return;
        }
        for (size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            bool ready = true;
            for (size_t p = 0; p < n; ++p)
                if (!used[p] && p != i && before[p][i]) {
                    ready = false;
                    break;
                }
            if (!ready) continue;
            used[i] = true;
            order.push_back(i);
            self(self);
            order.pop_back();
            used[i] = false;
        }
    };
    rec(rec);
    if (best.empty()) return;
    auto original = h.inner;
    for (size_t k = 0; k < n; ++k) h.inner[k] = original[best[k]];
}

inline HeadForm norm_form(const MP& t) {
    HeadForm h = head_norm(t);
    canonicalize_pendings(h);
    return h;
}

// Arguments are stored hereditarily normalized: the equivalence is a
// congruence, so a shuffle buried inside an argument must not change the
// normal form either.
inline MP norm_arg(const MP& t) { return to_term(norm_form(t)); }

inline HeadForm head_norm(const MP& t) {
    switch (t->kind) {
        case MKind::Var: {
            HeadForm h;
            h.head = t->x;
            return h;
        }
        case MKind::Lam: {
            HeadForm h = head_norm(t->m);
            h.outer.insert(h.outer.begin(), {t->x, t->ty});
            return h;
        }
        case MKind::App: {
            HeadForm h = head_norm(t->m);
            MP arg = norm_arg(t->n);
            if (!h.outer.empty()) {
                auto b = h.outer.front();
                h.outer.erase(h.outer.begin());
                h.inner.insert(h.inner.begin(), {b.x, b.ty, arg});
            } else {
                h.args.push_back(arg);
            }
            return h;
        }
        default:
            fail("head form normalization requires a pure lambda term");
    }
}

}  // namespace detail

inline HeadForm sigma_normalize(const MP& t) { return detail::norm_form(rename_apart(t)); }

inline bool sigma_equivalent(const MP& a, const MP& b) {
    return alpha_equal(to_term(sigma_normalize(a)), to_term(sigma_normalize(b)));
}

// One head linear reduction step: if the head variable is bound by a pending
// argument, replace that head occurrence by a copy of the argument and
// renormalize. Other occurrences of the binder keep their pending binding.
inline std::optional<HeadForm> hlr_step(const HeadForm& h) {
    for (const auto& p : h.inner) {
        if (p.x != h.head) continue;
        MP t = p.arg;  // fresh copy comes from the rename_apart inside sigma_normalize
        for (const auto& a : h.args) t = mapp(t, a);
        for (auto it = h.inner.rbegin(); it != h.inner.rend(); ++it)
            t = mapp(mlam(it->x, it->ty, t), it->arg);
        for (auto it = h.outer.rbegin(); it != h.outer.rend(); ++it) t = mlam(it->x, it->ty, t);
        return sigma_normalize(t);
    }
    return std::nullopt;
}

inline std::optional<HeadForm> hlr_step(const MP& t) { return hlr_step(sigma_normalize(t)); }

}  // namespace fuspi::lam
