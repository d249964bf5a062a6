#pragma once

#include <string>
#include <vector>

#include "fuspi/lam/sigma.hpp"
#include "fuspi/mach/machine.hpp"
#include "fuspi/pi/bisim.hpp"
#include "fuspi/pi/lts.hpp"
#include "fuspi/pi/print.hpp"
#include "fuspi/trans/translate.hpp"
#include "fuspi/verify/normal.hpp"

// Lockstep harnesses: run a machine and the translated process side by side,
// spending each step's communication budget on the process and checking that
// the two sides stay equal. Equality is structural under the comparison normal
// form wherever possible; genuinely duplicated continuations fall back to the
// bounded bisimulation check and are counted.

namespace fuspi::verify {

struct StepRecord {
    int index = 0;
    std::string action;   // machine step description
    std::string exec;     // machine configuration after the step
    std::string process;  // process side after spending the budget, normalized
    std::vector<std::string> labels;  // one entry per communication spent
    int taus = 0;                     // communication budget spent
    bool structural = false;
    bool bisim_used = false;
    int tau_branching = 1;  // largest number of distinct successors seen
};

struct CorrespondenceReport {
    bool ok = false;
    std::string strategy;
    int steps = 0;
    int bisim_fallbacks = 0;
    int drained_taus = 0;
    bool deterministic = true;
    std::string terminal_machine;
    std::string terminal_process;
    std::vector<StepRecord> records;
    std::string failure;
};

namespace detail {

// What the process side looks like once the machine stops: something speaking
// at the anchor is a delivered value, something speaking at another free name
// is a stuck head variable.
inline std::string process_terminal_kind(const pi::PP& p, const Name& anchor) {
    NameVec binders;
    std::vector<pi::PP> items;
    split_scope(p, binders, items);
    NameSet bound(binders.begin(), binders.end());
    if (items.empty()) return "value";  // the whole state collapsed into wiring
    for (auto& it : items) {
        if (it->kind == pi::PKind::Fuse && (it->name_a == anchor || it->name_b == anchor))
            return "value";
        for (auto& s : head_subjects(it))
            if (s == anchor) return "value";
    }
    for (auto& it : items)
        for (auto& s : head_subjects(it))
            if (!bound.count(s)) return "head-variable";
    return "stuck";
}

struct Sides {
    bool structural = false;
    bool bisim_used = false;
    bool bisim_ok = false;
};

inline Sides compare_sides(const pi::PP& machine_side, const pi::PP& process_side) {
    Sides r;
    r.structural = comparator_key(machine_side) == comparator_key(process_side);
    if (r.structural) return r;
    r.bisim_used = true;
    r.bisim_ok = pi::bisimilar(machine_side, process_side, Budget{}) == Verdict::Yes;
    return r;
}

}  // namespace detail

inline CorrespondenceReport check_step_correspondence(const lam::MP& term,
                                                      const trans::Strategy& st,
                                                      int max_steps = 10000) {
    CorrespondenceReport rep;
    rep.strategy = st.name;
    Name anchor = mkname("result");
    mach::Machine m = mach::Machine::load(term, st, anchor);
    pi::PP p = admin_normalize(trans::translate(term, st, anchor));

    {
        detail::Sides s0 = detail::compare_sides(m.process(), p);
        if (s0.bisim_used) ++rep.bisim_fallbacks;
        if (!s0.structural && !s0.bisim_ok) {
            rep.failure = "loading the term already changed the process";
            return rep;
        }
    }

    while (rep.steps < max_steps) {
        auto info = m.step();
        if (!info) break;
        StepRecord rec;
        rec.index = rep.steps;
        rec.action = info->desc;
        rec.exec = m.show();
        rec.taus = info->taus;

        for (int k = 0; k < info->taus; ++k) {
            std::vector<pi::PP> succs = pi::reduce(p);
            if (succs.empty()) {
                rep.failure = "machine stepped but the process cannot: " + rec.action;
                rep.records.push_back(rec);
                return rep;
            }
            if (succs.size() > 1) {
                rep.deterministic = false;
                rec.tau_branching = std::max(rec.tau_branching, (int)succs.size());
            }
            pi::PP next = succs[0];
            if (succs.size() > 1 && k == info->taus - 1) {
                // prefer the successor the machine lands on
                std::string want = comparator_key(m.process());
                for (auto& s : succs)
                    if (comparator_key(s) == want) {
                        next = s;
                        break;
                    }
            }
            p = next;
        }
        p = admin_normalize(p);
        rec.process = pi::to_string(p);
        rec.labels.assign(info->taus, "tau");

        detail::Sides s = detail::compare_sides(m.process(), p);
        rec.structural = s.structural;
        rec.bisim_used = s.bisim_used;
        if (s.bisim_used) ++rep.bisim_fallbacks;
        rep.records.push_back(rec);
        ++rep.steps;
        if (!s.structural && !s.bisim_ok) {
            rep.failure = "sides diverge after step: " + rec.action;
            return rep;
        }
    }

    // Let the process finish delivering into a frame the machine could not
    // enter (a value meeting a frame that needs a different shape).
    for (int d = 0; d < 4; ++d) {
        std::vector<pi::PP> succs = pi::reduce(p);
        if (succs.empty()) break;
        if (succs.size() > 1) rep.deterministic = false;
        p = admin_normalize(succs[0]);
        ++rep.drained_taus;
    }
    if (!pi::reduce(p).empty()) {
        rep.failure = "process keeps communicating after the machine stopped";
        return rep;
    }

    Name final_anchor = m.by_name ? m.n.k.anchor : m.v.k.anchor;
    rep.terminal_machine = m.terminal_kind();
    rep.terminal_process = detail::process_terminal_kind(p, final_anchor);
    if (rep.terminal_machine == "value" && rep.terminal_process != "value")
        rep.failure = "machine delivered a value but the process did not";
    else if (rep.terminal_machine == "head-variable" && rep.terminal_process != "head-variable")
        rep.failure = "machine stopped at a head variable but the process did not";
    else if (rep.terminal_machine == "stuck")
        rep.failure = "machine stuck outside the two terminal shapes";
    rep.ok = rep.failure.empty();
    return rep;
}

// Lockstep against head linear reduction for the arity translation: one
// reduction step costs exactly one communication step.
struct HlrReport {
    bool ok = false;
    int steps = 0;
    bool deterministic = true;
    int bisim_fallbacks = 0;
    std::string failure;
};

inline HlrReport check_hlr_correspondence(const lam::MP& term, const lam::TypeCtx& ctx,
                                          int max_steps = 200) {
    HlrReport rep;
    auto& st = trans::strategy_named("simply");
    lam::HeadForm h = lam::sigma_normalize(term);
    lam::TP ty = lam::typecheck(lam::to_term(h), ctx);
    int width = lla::arity(trans::tr_type(ty, st), trans::type_arities(st));
    NameVec ys;
    for (int i = 0; i < width; ++i) ys.push_back(mkname("r" + std::to_string(i + 1)));

    pi::PP p = admin_normalize(trans::translate_simple(lam::to_term(h), ctx, ys));
    while (rep.steps < max_steps) {
        auto h2 = lam::hlr_step(h);
        if (!h2) break;
        h = *h2;
        std::vector<pi::PP> succs = pi::reduce(p);
        if (succs.empty()) {
            rep.failure = "reduction stepped but the process cannot";
            return rep;
        }
        if (succs.size() > 1) rep.deterministic = false;
        p = admin_normalize(succs[0]);
        ++rep.steps;

        pi::PP q = admin_normalize(trans::translate_simple(lam::to_term(h), ctx, ys));
        if (comparator_key(p) != comparator_key(q)) {
            ++rep.bisim_fallbacks;
            if (pi::bisimilar(p, q, Budget{}) != Verdict::Yes) {
                rep.failure = "sides diverge after reduction step " + std::to_string(rep.steps);
                return rep;
            }
        }
    }
    if (!pi::reduce(p).empty()) {
        rep.failure = "process keeps communicating after reduction stopped";
        return rep;
    }
    rep.ok = true;
    return rep;
}

}  // namespace fuspi::verify
