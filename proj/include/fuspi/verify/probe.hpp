#pragma once

#include <map>
#include <queue>
#include <string>
#include <vector>

#include "fuspi/lla/sequent.hpp"
#include "fuspi/pi/lts.hpp"
#include "fuspi/trans/emit.hpp"
#include "fuspi/verify/normal.hpp"

// Liveness probing. For each interface channel of a translated term we build
// the formula-directed environment process: it plays the dual of every
// protocol step the typing promises and raises the reserved flag name omega
// when a protocol bottoms out. The composed system passes when every reachable
// state can still reach a state with an enabled omega action, so no run ever
// paints itself into a corner.

namespace fuspi::verify {

inline Name omega_name() { return mkname("omega"); }

namespace detail {

inline pi::PP probe_at(const lla::FP& f, const Name& c, const lla::ArityCtx& actx);

inline NameVec fresh_names(int k) {
    NameVec ws;
    for (int i = 0; i < k; ++i) ws.push_back(fresh("w"));
    return ws;
}

inline bool modal_head(const lla::FP& f) {
    switch (f->kind) {
        case lla::FKind::Down:
        case lla::FKind::Up:
        case lla::FKind::Bang:
        case lla::FKind::Quest:
            return true;
        default:
            return false;
    }
}

// The environment of a formula spread over a payload name vector.
inline pi::PP probe_names(const lla::FP& f, const NameVec& names, const lla::ArityCtx& actx) {
    using lla::FKind;
    switch (f->kind) {
        case FKind::Var:
        case FKind::NegVar:
            return pi::macro_out(omega_name(), {});
        case FKind::Forall:
        case FKind::Exists:
            return probe_names(f->sub, names, actx);
        case FKind::Tensor:
        case FKind::Parr: {
            int k = lla::arity(f->left, actx);
            NameVec ls(names.begin(), names.begin() + k);
            NameVec rs(names.begin() + k, names.end());
            return pi::par(probe_names(f->left, ls, actx), probe_names(f->right, rs, actx));
        }
        case FKind::Plus: {
            // The process picks a side by speaking up on one of the two
            // payload names; the environment listens on both.
            if (f->left->kind == FKind::Up && f->right->kind == FKind::Up) {
                std::vector<pi::Branch> bs;
                NameVec ws1 = fresh_names(lla::arity(f->left->sub, actx));
                NameVec ws2 = fresh_names(lla::arity(f->right->sub, actx));
                bs.push_back({pi::Action{true, names[0], ws1},
                              probe_names(f->left->sub, ws1, actx)});
                bs.push_back({pi::Action{true, names[1], ws2},
                              probe_names(f->right->sub, ws2, actx)});
                return pi::choice(std::move(bs));
            }
            return pi::par(probe_at(f->left, names[0], actx), probe_at(f->right, names[1], actx));
        }
        case FKind::With:
            // The environment picks: always the left component.
            return probe_at(f->left, names[0], actx);
        default:
            // A modality carries a single payload name.
            return probe_at(f, names[0], actx);
    }
}

inline pi::PP probe_at(const lla::FP& f, const Name& c, const lla::ArityCtx& actx) {
    using lla::FKind;
    switch (f->kind) {
        case FKind::Forall:
        case FKind::Exists:
            return probe_at(f->sub, c, actx);
        case FKind::Quest: {
            // The process requests as often as it likes; serve every request.
            NameVec ws = fresh_names(lla::arity(f->sub, actx));
            return pi::repl(pi::Action{true, c, ws}, probe_names(f->sub, ws, actx));
        }
        case FKind::Bang: {
            // The process serves; place one request.
            NameVec ws = fresh_names(lla::arity(f->sub, actx));
            return pi::output(c, ws, probe_names(f->sub, ws, actx));
        }
        case FKind::Down: {
            NameVec ws = fresh_names(lla::arity(f->sub, actx));
            return pi::output(c, ws, probe_names(f->sub, ws, actx));
        }
        case FKind::Up: {
            NameVec ws = fresh_names(lla::arity(f->sub, actx));
            return pi::input(c, ws, probe_names(f->sub, ws, actx));
        }
        default:
            return probe_names(f, {c}, actx);
    }
}

}  // namespace detail

struct ProbeReport {
    bool ok = false;
    int states = 0;
    std::string failure;
};

// Composes a process with the environment probes derived from a sequent.
inline pi::PP compose_probes(const pi::PP& p, const lla::Sequent& seq,
                             const lla::ArityCtx& actx) {
    std::vector<pi::PP> parts{p};
    for (auto& e : seq.entries) {
        if (e.names.size() != 1) fail("probe: entries must hold a single name");
        parts.push_back(detail::probe_at(e.formula, e.names[0], actx));
    }
    return pi::par(std::move(parts));
}

// True when the state has an enabled action at the flag name.
inline bool omega_enabled(const pi::PP& p) {
    for (auto& t : pi::transitions(p))
        if (t.label.visible() && t.label.cls.count(omega_name())) return true;
    return false;
}

// Explores the communication graph and demands that every reachable state can
// still reach a state with the flag enabled.
inline ProbeReport run_probe(const pi::PP& composed, int state_cap = 4000) {
    ProbeReport rep;
    std::map<std::string, int> ids;
    std::vector<pi::PP> states;
    std::vector<std::vector<int>> succ;
    std::vector<bool> flagged, expanded;

    auto intern = [&](const pi::PP& q) -> int {
        std::string k = pi::normal_key(q);
        auto it = ids.find(k);
        if (it != ids.end()) return it->second;
        int id = (int)states.size();
        ids.emplace(k, id);
        states.push_back(q);
        succ.emplace_back();
        flagged.push_back(omega_enabled(q));
        expanded.push_back(false);
        return id;
    };

    std::queue<int> work;
    work.push(intern(pi::congruence_normalize(composed)));
    while (!work.empty()) {
        int id = work.front();
        work.pop();
        if (expanded[id]) continue;
        expanded[id] = true;
        if (states.size() > (size_t)state_cap) {
            rep.failure = "state budget exceeded";
            rep.states = (int)states.size();
            return rep;
        }
        for (auto& q : pi::reduce(states[id])) {
            int next = intern(q);
            succ[id].push_back(next);
            if (!expanded[next]) work.push(next);
        }
    }
    rep.states = (int)states.size();

    // reverse reachability from flagged states
    std::vector<std::vector<int>> pred(states.size());
    for (size_t i = 0; i < states.size(); ++i)
        for (int j : succ[i]) pred[j].push_back((int)i);
    std::vector<bool> live(states.size(), false);
    std::queue<int> rev;
    for (size_t i = 0; i < states.size(); ++i)
        if (flagged[i]) {
            live[i] = true;
            rev.push((int)i);
        }
    while (!rev.empty()) {
        int id = rev.front();
        rev.pop();
        for (int j : pred[id])
            if (!live[j]) {
                live[j] = true;
                rev.push(j);
            }
    }
    for (size_t i = 0; i < states.size(); ++i)
        if (!live[i]) {
            rep.failure = "a reachable state cannot raise the flag";
            return rep;
        }
    rep.ok = true;
    return rep;
}

// End-to-end probe for a typed term under a strategy.
inline ProbeReport deadlock_probe(const lam::MP& term, const lam::TypeCtx& ctx,
                                  const lam::TypeCtx& muctx, const trans::Strategy& st) {
    Name u = mkname("result");
    lam::TP ty = lam::typecheck(term, ctx, muctx);
    lla::Sequent seq = trans::build_theorem_sequent(ctx, ty, muctx, st, u);
    pi::PP p = trans::translate(term, st, u);
    lla::ArityCtx actx = trans::type_arities(st);
    return run_probe(compose_probes(p, seq, actx));
}

}  // namespace fuspi::verify
