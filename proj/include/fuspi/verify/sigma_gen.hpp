#pragma once

#include <random>
#include <vector>

#include "fuspi/lam/sigma.hpp"

// Seeded generator of argument-shuffle pairs: random simply typed terms next
// to a partner obtained by a few applications of the two shuffle moves,
//
//   (\x. M) N P   <->  (\x. M P) N     when x is not free in P
//   \y. (\x. M) N <->  (\x. \y. M) N   when y is not free in N
//
// which generate the equivalence the head-form normalization decides. Terms
// are typed so the arity translation can be applied to both halves.

namespace fuspi::verify {

struct SigmaPair {
    lam::MP a, b;
};

// Ambient typed globals the generator may mention.
inline const lam::TypeCtx& sigma_globals() {
    static const lam::TypeCtx ctx = [] {
        lam::TypeCtx c;
        for (const char* v : {"m", "n", "k"}) c.emplace_back(mkname(v), lam::parse_type("X"));
        for (const char* v : {"f", "g"}) c.emplace_back(mkname(v), lam::parse_type("X -> X"));
        c.emplace_back(mkname("h"), lam::parse_type("(X -> X) -> X"));
        return c;
    }();
    return ctx;
}

namespace detail {

inline lam::TP gen_type(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> coin(0, 2);
    if (depth <= 0 || coin(rng) > 0) return lam::parse_type("X");
    return lam::tarrow(gen_type(rng, depth - 1), gen_type(rng, depth - 1));
}

inline lam::MP gen_typed(std::mt19937& rng, lam::TypeCtx& scope, const lam::TP& goal,
                         int depth) {
    std::vector<const Name*> hits;
    for (auto& [x, ty] : scope)
        if (lam::type_equal(ty, goal)) hits.push_back(&x);
    std::uniform_int_distribution<int> coin(0, 9);
    int roll = depth <= 0 ? (hits.empty() ? 10 : 0) : coin(rng);
    if (roll < 3 && !hits.empty()) {
        std::uniform_int_distribution<size_t> pick(0, hits.size() - 1);
        return lam::mvar(*hits[pick(rng)]);
    }
    if (goal->kind == lam::TKind::Arrow && (roll < 7 || depth <= 0)) {
        Name x = fresh("x");
        scope.emplace_back(x, goal->a);
        lam::MP body = gen_typed(rng, scope, goal->b, depth - 1);
        scope.pop_back();
        return lam::mlam(x, goal->a, body);
    }
    if (depth <= 0) return lam::mvar(mkname("m"));  // goal is the base type here
    lam::TP arg = gen_type(rng, 1);
    lam::MP fn = gen_typed(rng, scope, lam::tarrow(arg, goal), depth - 1);
    lam::MP av = gen_typed(rng, scope, arg, depth - 1);
    return lam::mapp(fn, av);
}

// All single-move rewrites of t, anywhere in the term.
inline void shuffle_variants(const lam::MP& t, std::vector<lam::MP>& out);

template <typename Rebuild>
inline void child_variants(const lam::MP& child, Rebuild rebuild, std::vector<lam::MP>& out) {
    if (!child) return;
    std::vector<lam::MP> vs;
    shuffle_variants(child, vs);
    for (auto& v : vs) out.push_back(rebuild(v));
}

inline void shuffle_variants(const lam::MP& t, std::vector<lam::MP>& out) {
    using lam::MKind;
    if (!t) return;
    if (t->kind == MKind::App) {
        const lam::MP& f = t->m;
        const lam::MP& p = t->n;
        // (\x. M) N P -> (\x. M P) N
        if (f->kind == MKind::App && f->m->kind == MKind::Lam &&
            !lam::free_vars(p).count(f->m->x)) {
            out.push_back(lam::mapp(
                lam::mlam(f->m->x, f->m->ty, lam::mapp(f->m->m, p)), f->n));
        }
        // (\x. M P) N -> (\x. M) N P
        if (f->kind == MKind::Lam && f->m->kind == MKind::App &&
            !lam::free_vars(f->m->n).count(f->x)) {
            out.push_back(lam::mapp(
                lam::mapp(lam::mlam(f->x, f->ty, f->m->m), p), f->m->n));
        }
        // (\x. \y. M) N -> \y. (\x. M) N
        if (f->kind == MKind::Lam && f->m->kind == MKind::Lam &&
            !lam::free_vars(p).count(f->m->x)) {
            out.push_back(lam::mlam(f->m->x, f->m->ty,
                                    lam::mapp(lam::mlam(f->x, f->ty, f->m->m), p)));
        }
    }
    if (t->kind == MKind::Lam) {
        const lam::MP& b = t->m;
        // \y. (\x. M) N -> (\x. \y. M) N
        if (b->kind == MKind::App && b->m->kind == MKind::Lam &&
            !lam::free_vars(b->n).count(t->x)) {
            out.push_back(lam::mapp(
                lam::mlam(b->m->x, b->m->ty, lam::mlam(t->x, t->ty, b->m->m)), b->n));
        }
    }
    switch (t->kind) {
        case MKind::Lam:
            child_variants(t->m, [&](const lam::MP& v) { return lam::mlam(t->x, t->ty, v); },
                           out);
            break;
        case MKind::App:
            child_variants(t->m, [&](const lam::MP& v) { return lam::mapp(v, t->n); }, out);
            child_variants(t->n, [&](const lam::MP& v) { return lam::mapp(t->m, v); }, out);
            break;
        default:
            break;
    }
}

}  // namespace detail

// Deterministic for a given seed; every pair is well typed over sigma_globals
// and checked against the head-form oracle before it is handed out.
inline std::vector<SigmaPair> sigma_pairs(uint32_t seed, int count) {
    std::mt19937 rng(seed);
    std::vector<SigmaPair> out;
    int spins = 0;
    while ((int)out.size() < count) {
        if (++spins > 1000 * count) fail("shuffle generator cannot find enough movable terms");
        lam::TypeCtx scope = sigma_globals();
        lam::TP goal = detail::gen_type(rng, 1);
        lam::MP a = lam::rename_apart(detail::gen_typed(rng, scope, goal, 5));
        lam::MP b = a;
        std::uniform_int_distribution<int> hops(1, 3);
        int moved = 0;
        for (int h = hops(rng); h > 0; --h) {
            std::vector<lam::MP> vs;
            detail::shuffle_variants(b, vs);
            if (vs.empty()) break;
            std::uniform_int_distribution<size_t> pick(0, vs.size() - 1);
            b = vs[pick(rng)];
            ++moved;
        }
        if (moved == 0) continue;
        if (!lam::type_equal(lam::typecheck(a, sigma_globals()),
                             lam::typecheck(b, sigma_globals())))
            fail("shuffle generator changed a type");
        if (!lam::sigma_equivalent(a, b)) fail("shuffle generator produced a bad pair");
        out.push_back({a, b});
    }
    return out;
}

}  // namespace fuspi::verify
