#pragma once

#include "fuspi/pi/ast.hpp"

#include <algorithm>

namespace fuspi::pi {

using Subst = std::map<Name, Name>;

inline void fv_into(const PP& p, NameSet& out, NameSet bound) {
    switch (p->kind) {
        case PKind::Nil:
            return;
        case PKind::Par:
            for (auto& c : p->children) fv_into(c, out, bound);
            return;
        case PKind::New: {
            bound.insert(p->name_a);
            fv_into(p->body, out, bound);
            return;
        }
        case PKind::Fuse:
            if (!bound.count(p->name_a)) out.insert(p->name_a);
            if (!bound.count(p->name_b)) out.insert(p->name_b);
            return;
        case PKind::Act:
        case PKind::Repl: {
            if (!bound.count(p->act.subj)) out.insert(p->act.subj);
            for (auto& b : p->act.binders) bound.insert(b);
            fv_into(p->body, out, bound);
            return;
        }
        case PKind::Choice: {
            for (auto& br : p->branches) {
                if (!bound.count(br.act.subj)) out.insert(br.act.subj);
                NameSet inner = bound;
                for (auto& b : br.act.binders) inner.insert(b);
                fv_into(br.body, out, inner);
            }
            return;
        }
        case PKind::MacroOut: {
            if (!bound.count(p->subj)) out.insert(p->subj);
            for (auto& x : p->payload)
                if (!bound.count(x)) out.insert(x);
            return;
        }
    }
}

inline NameSet free_names(const PP& p) {
    NameSet out;
    fv_into(p, out, {});
    return out;
}

inline Name ren(const Subst& s, const Name& n) {
    auto it = s.find(n);
    return it == s.end() ? n : it->second;
}

inline NameVec ren(const Subst& s, const NameVec& ns) {
    NameVec out;
    out.reserve(ns.size());
    for (auto& n : ns) out.push_back(ren(s, n));
    return out;
}

namespace detail {

inline bool hits_target(const Subst& s, const Name& b) {
    for (auto& [k, v] : s)
        if (v == b) return true;
    return false;
}

// Refresh binder b if the substitution would capture it; s is edited in place
// for the scope of the binder.
inline Name enter_binder(Subst& s, const Name& b) {
    s.erase(b);
    if (!hits_target(s, b)) return b;
    Name nb = freshen(b);
    s[b] = nb;
    return nb;
}

}  // namespace detail

inline PP substitute(const PP& p, const Subst& subst) {
    switch (p->kind) {
        case PKind::Nil:
            return p;
        case PKind::Par: {
            std::vector<PP> cs;
            cs.reserve(p->children.size());
            for (auto& c : p->children) cs.push_back(substitute(c, subst));
            return par(std::move(cs));
        }
        case PKind::New: {
            Subst s = subst;
            Name b = detail::enter_binder(s, p->name_a);
            return nu(b, substitute(p->body, s));
        }
        case PKind::Fuse:
            return fuse(ren(subst, p->name_a), ren(subst, p->name_b));
        case PKind::Act:
        case PKind::Repl: {
            Action a = p->act;
            a.subj = ren(subst, a.subj);
            Subst s = subst;
            for (auto& b : a.binders) b = detail::enter_binder(s, b);
            PP body = substitute(p->body, s);
            return p->kind == PKind::Act ? act(a, body) : repl(a, body);
        }
        case PKind::Choice: {
            std::vector<Branch> brs;
            for (auto& br : p->branches) {
                Action a = br.act;
                a.subj = ren(subst, a.subj);
                Subst s = subst;
                for (auto& b : a.binders) b = detail::enter_binder(s, b);
                brs.push_back({a, substitute(br.body, s)});
            }
            return choice(std::move(brs));
        }
        case PKind::MacroOut:
            return macro_out(ren(subst, p->subj), ren(subst, p->payload));
    }
    fail("substitute: bad node");
}

inline PP rename_one(const PP& p, const Name& from, const Name& to) {
    if (from == to) return p;
    return substitute(p, Subst{{from, to}});
}

// 'u<xs> => 'u(ys).(x1~y1 | ... | xn~yn) with fresh ys.
inline PP expand_one_macro(const Name& u, const NameVec& xs) {
    NameVec ys;
    std::vector<PP> fusions;
    for (size_t i = 0; i < xs.size(); ++i) {
        Name y = fresh("y" + std::to_string(i + 1));
        ys.push_back(y);
        fusions.push_back(fuse(xs[i], y));
    }
    return output(u, ys, par(std::move(fusions)));
}

inline PP expand_output_macro(const PP& p) {
    switch (p->kind) {
        case PKind::Nil:
        case PKind::Fuse:
            return p;
        case PKind::Par: {
            std::vector<PP> cs;
            for (auto& c : p->children) cs.push_back(expand_output_macro(c));
            return par(std::move(cs));
        }
        case PKind::New:
            return nu(p->name_a, expand_output_macro(p->body));
        case PKind::Act:
            return act(p->act, expand_output_macro(p->body));
        case PKind::Repl:
            return repl(p->act, expand_output_macro(p->body));
        case PKind::Choice: {
            std::vector<Branch> brs;
            for (auto& br : p->branches) brs.push_back({br.act, expand_output_macro(br.body)});
            return choice(std::move(brs));
        }
        case PKind::MacroOut:
            return expand_one_macro(p->subj, p->payload);
    }
    fail("expand_output_macro: bad node");
}

namespace detail {

struct AlphaEnv {
    std::map<Name, int> left, right;
    int depth = 0;

    bool name_eq(const Name& a, const Name& b) const {
        auto la = left.find(a);
        auto rb = right.find(b);
        if (la == left.end() && rb == right.end()) return a == b;
        if (la == left.end() || rb == right.end()) return false;
        return la->second == rb->second;
    }
    void push(const Name& a, const Name& b) {
        left[a] = depth;
        right[b] = depth;
        ++depth;
    }
};

inline bool alpha_eq(const PP& p, const PP& q, AlphaEnv env);

inline bool alpha_eq_act(const Action& a, const Action& b, AlphaEnv& env) {
    if (a.input != b.input || a.binders.size() != b.binders.size()) return false;
    if (!env.name_eq(a.subj, b.subj)) return false;
    for (size_t i = 0; i < a.binders.size(); ++i) env.push(a.binders[i], b.binders[i]);
    return true;
}

inline bool alpha_eq(const PP& p, const PP& q, AlphaEnv env) {
    if (p->kind != q->kind) return false;
    switch (p->kind) {
        case PKind::Nil:
            return true;
        case PKind::Par: {
            if (p->children.size() != q->children.size()) return false;
            for (size_t i = 0; i < p->children.size(); ++i)
                if (!alpha_eq(p->children[i], q->children[i], env)) return false;
            return true;
        }
        case PKind::New: {
            AlphaEnv e = env;
            e.push(p->name_a, q->name_a);
            return alpha_eq(p->body, q->body, e);
        }
        case PKind::Fuse:
            return env.name_eq(p->name_a, q->name_a) && env.name_eq(p->name_b, q->name_b);
        case PKind::Act:
        case PKind::Repl: {
            AlphaEnv e = env;
            if (!alpha_eq_act(p->act, q->act, e)) return false;
            return alpha_eq(p->body, q->body, e);
        }
        case PKind::Choice: {
            if (p->branches.size() != q->branches.size()) return false;
            for (size_t i = 0; i < p->branches.size(); ++i) {
                AlphaEnv e = env;
                if (!alpha_eq_act(p->branches[i].act, q->branches[i].act, e)) return false;
                if (!alpha_eq(p->branches[i].body, q->branches[i].body, e)) return false;
            }
            return true;
        }
        case PKind::MacroOut: {
            if (!env.name_eq(p->subj, q->subj)) return false;
            if (p->payload.size() != q->payload.size()) return false;
            for (size_t i = 0; i < p->payload.size(); ++i)
                if (!env.name_eq(p->payload[i], q->payload[i])) return false;
            return true;
        }
    }
    return false;
}

}  // namespace detail

inline bool alpha_equal(const PP& p, const PP& q) {
    return detail::alpha_eq(p, q, {});
}

// Gives every binder a globally fresh name, so distinct scopes never share
// bound names and no bound name collides with a free one.
inline PP rename_apart(const PP& p, Subst s = {}) {
    switch (p->kind) {
        case PKind::Nil:
            return p;
        case PKind::Par: {
            std::vector<PP> cs;
            for (auto& c : p->children) cs.push_back(rename_apart(c, s));
            return par(std::move(cs));
        }
        case PKind::New: {
            Name nb = freshen(p->name_a);
            s[p->name_a] = nb;
            return nu(nb, rename_apart(p->body, s));
        }
        case PKind::Fuse:
            return fuse(ren(s, p->name_a), ren(s, p->name_b));
        case PKind::Act:
        case PKind::Repl: {
            Action a = p->act;
            a.subj = ren(s, a.subj);
            for (auto& b : a.binders) {
                Name nb = freshen(b);
                s[b] = nb;
                b = nb;
            }
            PP body = rename_apart(p->body, s);
            return p->kind == PKind::Act ? act(a, body) : repl(a, body);
        }
        case PKind::Choice: {
            std::vector<Branch> brs;
            for (auto& br : p->branches) {
                Subst s2 = s;
                Action a = br.act;
                a.subj = ren(s2, a.subj);
                for (auto& b : a.binders) {
                    Name nb = freshen(b);
                    s2[b] = nb;
                    b = nb;
                }
                brs.push_back({a, rename_apart(br.body, s2)});
            }
            return choice(std::move(brs));
        }
        case PKind::MacroOut:
            return macro_out(ren(s, p->subj), ren(s, p->payload));
    }
    fail("rename_apart: bad node");
}

}  // namespace fuspi::pi
