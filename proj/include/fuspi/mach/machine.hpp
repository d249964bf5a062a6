#pragma once

#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "fuspi/lam/ast.hpp"
#include "fuspi/trans/translate.hpp"

// Stack machines for the two evaluation orders, with process translations of
// whole machine configurations.
//
// A configuration is a focused term, a stack of frames ending in an anchor
// name, and an environment of anchored stacks. A mu binder parks the running
// stack in the environment under its own name and continues with the empty
// stack at the jump target; the machine fetches an anchored stack back only
// when the running one empties at its name. Kept this way, every
// administrative move is a structural identity on the process side, and
// refetching a continuation that is still referenced elsewhere is the only
// move that duplicates process material.
//
// Each proper step reports the number of communication steps the translated
// process needs for the same move, which depends only on the strategy's
// modality words.

namespace fuspi::mach {

struct StepInfo {
    std::string desc;
    int taus = 0;
};

// ---------------------------------------------------------------- call by name

struct CbnFrame {
    enum Kind { Arg, Split, Select } kind;
    lam::MP m;   // Arg: the argument; Split: the body; Select: the left branch
    lam::MP m2;  // Select: the right branch
    Name x, y;   // Split binders, or the two Select binders
};

struct CbnCont {
    std::deque<CbnFrame> fs;  // front = next frame to consume
    Name anchor;
};

struct CbnState {
    lam::MP focus;
    CbnCont k;
    std::vector<std::pair<Name, CbnCont>> env;  // anchored continuations
};

template <typename Cont>
inline const Cont* find_anchored(const std::vector<std::pair<Name, Cont>>& env, const Name& a) {
    for (size_t i = env.size(); i-- > 0;)
        if (env[i].first == a) return &env[i].second;
    return nullptr;
}

// Drives the structural moves: unfolding the focus into frames, parking the
// stack at a mu binder, and refetching an anchored stack when the running one
// empties. None of them costs a communication step.
inline void cbn_admin(CbnState& s, int fuel = 100000) {
    using lam::MKind;
    while (fuel-- > 0) {
        const lam::MP& t = s.focus;
        switch (t->kind) {
            case MKind::App:
                s.k.fs.push_front(CbnFrame{CbnFrame::Arg, t->n, nullptr, Name{}, Name{}});
                s.focus = t->m;
                continue;
            case MKind::Let:
                s.k.fs.push_front(CbnFrame{CbnFrame::Split, t->n, nullptr, t->x, t->y});
                s.focus = t->m;
                continue;
            case MKind::Case:
                s.k.fs.push_front(CbnFrame{CbnFrame::Select, t->n, t->n2, t->x, t->y});
                s.focus = t->m;
                continue;
            case MKind::TyLam:
            case MKind::TyApp:
                s.focus = t->m;
                continue;
            case MKind::Mu:
                s.env.emplace_back(t->x, s.k);
                s.k = CbnCont{{}, t->y};
                s.focus = t->m;
                continue;
            default:
                if (s.k.fs.empty()) {
                    if (const CbnCont* c = find_anchored(s.env, s.k.anchor)) {
                        s.k = *c;
                        continue;
                    }
                }
                return;
        }
    }
    fail("call-by-name machine: administrative moves did not settle");
}

inline CbnState cbn_load(const lam::MP& t, const Name& tail) {
    CbnState s{lam::rename_apart(t), CbnCont{{}, tail}, {}};
    cbn_admin(s);
    return s;
}

// One proper step. Returns nothing when the configuration is terminal.
inline std::optional<StepInfo> cbn_step(CbnState& s, const trans::Strategy& st) {
    using lam::MKind;
    const lam::MP& t = s.focus;
    std::optional<StepInfo> info;
    if (t->kind == MKind::Sharp) {
        s.focus = t->m;
        info = StepInfo{"force suspended argument", (int)st.delta_c.size()};
    } else if (!s.k.fs.empty()) {
        const CbnFrame& f = s.k.fs.front();
        if (t->kind == MKind::Lam && f.kind == CbnFrame::Arg) {
            lam::MP body = lam::substitute(t->m, {{t->x, lam::msharp(f.m)}});
            s.k.fs.pop_front();
            s.focus = body;
            info = StepInfo{"apply function", (int)st.delta.size()};
        } else if (t->kind == MKind::Pair && f.kind == CbnFrame::Split) {
            lam::MP body = lam::substitute(
                f.m, {{f.x, lam::msharp(t->m)}, {f.y, lam::msharp(t->n)}});
            s.k.fs.pop_front();
            s.focus = body;
            info = StepInfo{"split pair", (int)st.delta.size()};
        } else if (t->kind == MKind::Inj && f.kind == CbnFrame::Select) {
            lam::MP branch = t->idx == 1 ? f.m : f.m2;
            Name binder = t->idx == 1 ? f.x : f.y;
            lam::MP body = lam::substitute(branch, {{binder, lam::msharp(t->m)}});
            s.k.fs.pop_front();
            s.focus = body;
            info = StepInfo{"select branch", (int)st.delta.size() + 1};
        }
    }
    if (info) cbn_admin(s);
    return info;
}

// Classification of a configuration no step applies to.
inline std::string cbn_terminal_kind(const CbnState& s) {
    if (s.focus->kind == lam::MKind::Var) return "head-variable";
    if (lam::is_value(s.focus) && s.k.fs.empty()) return "value";
    return "stuck";
}

// ---------------------------------------------------------------- call by value

struct CbvFrame {
    enum Kind { Fun, ArgVal, Split, Select } kind;
    lam::MP m, m2;
    Name x, y;
};

struct CbvCont {
    std::deque<CbvFrame> fs;  // back = top of the stack
    Name anchor;
};

struct CbvState {
    lam::MP focus;  // term under evaluation; the function value when applying
    lam::MP arg;    // the argument value when applying
    bool applying = false;
    CbvCont k;
    std::vector<std::pair<Name, CbvCont>> env;
};

inline void cbv_admin(CbvState& s, int fuel = 100000) {
    using lam::MKind;
    while (!s.applying && fuel-- > 0) {
        const lam::MP& t = s.focus;
        switch (t->kind) {
            case MKind::App:
                // The argument is evaluated first; the function waits.
                s.k.fs.push_back(CbvFrame{CbvFrame::Fun, t->m, nullptr, Name{}, Name{}});
                s.focus = t->n;
                continue;
            case MKind::Let:
                s.k.fs.push_back(CbvFrame{CbvFrame::Split, t->n, nullptr, t->x, t->y});
                s.focus = t->m;
                continue;
            case MKind::Case:
                s.k.fs.push_back(CbvFrame{CbvFrame::Select, t->n, t->n2, t->x, t->y});
                s.focus = t->m;
                continue;
            case MKind::TyLam:
            case MKind::TyApp:
                s.focus = t->m;
                continue;
            case MKind::Mu:
                s.env.emplace_back(t->x, s.k);
                s.k = CbvCont{{}, t->y};
                s.focus = t->m;
                continue;
            case MKind::Sharp:
                fail("call-by-value machine: unexpected suspension marker");
            default:
                if (s.k.fs.empty()) {
                    if (const CbvCont* c = find_anchored(s.env, s.k.anchor)) {
                        s.k = *c;
                        continue;
                    }
                }
                return;
        }
    }
    if (!s.applying) fail("call-by-value machine: administrative moves did not settle");
}

inline CbvState cbv_load(const lam::MP& t, const Name& tail) {
    CbvState s{lam::rename_apart(t), nullptr, false, CbvCont{{}, tail}, {}};
    cbv_admin(s);
    return s;
}

inline std::optional<StepInfo> cbv_step(CbvState& s, const trans::Strategy& st) {
    using lam::MKind;
    std::optional<StepInfo> info;
    if (s.applying) {
        if (s.focus->kind == MKind::Lam) {
            lam::MP body = lam::substitute(s.focus->m, {{s.focus->x, s.arg}});
            s.applying = false;
            s.arg = nullptr;
            s.focus = body;
            info = StepInfo{"apply function", (int)st.gamma.size()};
        }
    } else if (lam::is_value(s.focus) && !s.k.fs.empty()) {
        CbvFrame f = s.k.fs.back();
        switch (f.kind) {
            case CbvFrame::Fun:
                s.k.fs.pop_back();
                s.k.fs.push_back(CbvFrame{CbvFrame::ArgVal, s.focus, nullptr, Name{}, Name{}});
                s.focus = f.m;
                info = StepInfo{"argument ready", (int)st.gamma_c.size()};
                break;
            case CbvFrame::ArgVal:
                s.k.fs.pop_back();
                s.arg = f.m;
                s.applying = true;
                info = StepInfo{"function ready", (int)st.gamma_c.size()};
                break;
            case CbvFrame::Split:
                if (s.focus->kind != MKind::Pair) break;
                s.k.fs.pop_back();
                s.focus = lam::substitute(f.m, {{f.x, s.focus->m}, {f.y, s.focus->n}});
                info = StepInfo{"split pair", (int)st.delta.size()};
                break;
            case CbvFrame::Select: {
                if (s.focus->kind != MKind::Inj) break;
                s.k.fs.pop_back();
                lam::MP branch = s.focus->idx == 1 ? f.m : f.m2;
                Name binder = s.focus->idx == 1 ? f.x : f.y;
                s.focus = lam::substitute(branch, {{binder, s.focus->m}});
                info = StepInfo{"select branch", (int)st.delta.size() + 1};
                break;
            }
        }
    }
    if (info) cbv_admin(s);
    return info;
}

inline std::string cbv_terminal_kind(const CbvState& s) {
    if (s.applying) return s.focus->kind == lam::MKind::Var ? "head-variable" : "stuck";
    if (s.focus->kind == lam::MKind::Var && !s.k.fs.empty()) return "head-variable";
    if (lam::is_value(s.focus) && s.k.fs.empty()) return "value";
    return "stuck";
}

// ------------------------------------------------- process views of machines

// The serving side of a stored value, rooted at x. Composed with the
// strategy's value-access prefix this is exactly the translation of the value.
inline pi::PP value_clause(const lam::MP& v, const Name& x, const trans::Strategy& st) {
    using lam::MKind;
    using trans::proto;
    switch (v->kind) {
        case MKind::Var:
            return pi::fuse(x, v->x);
        case MKind::TyLam:
            return value_clause(v->m, x, st);
        case MKind::Lam: {
            Name u = fresh("v");
            return proto(st.gamma, x, {v->x, u}, trans::translate(v->m, st, u));
        }
        case MKind::Pair: {
            Name a = fresh("x"), b = fresh("y"), p = fresh("v"), q = fresh("w");
            return proto(st.gamma, x, {a, b},
                         pi::par(proto(st.delta_c, a, {p}, trans::translate(v->m, st, p)),
                                 proto(st.delta_c, b, {q}, trans::translate(v->n, st, q))));
        }
        case MKind::Inj: {
            Name a1 = fresh("a"), a2 = fresh("a"), p = fresh("v");
            Name ai = v->idx == 1 ? a1 : a2;
            return proto(st.gamma, x, {a1, a2},
                         proto("^" + st.delta_c, ai, {p}, trans::translate(v->m, st, p)));
        }
        default:
            fail("value clause: not a value");
    }
}

// The consumer chain of a call-by-name stack rooted at u: each frame is the
// co protocol its focus side speaks, handing the rest of the stack a fresh
// channel, and the exhausted stack fuses with its anchor.
inline pi::PP cbn_cont_proc(const CbnCont& k, size_t i, const Name& u, const trans::Strategy& st) {
    using trans::co;
    using trans::dual_word;
    using trans::proto;
    using trans::Slot;
    if (i == k.fs.size()) return pi::fuse(u, k.anchor);
    const CbnFrame& f = k.fs[i];
    Name v = fresh("v");
    pi::PP rest = cbn_cont_proc(k, i + 1, v, st);
    switch (f.kind) {
        case CbnFrame::Arg: {
            if (trans::inline_application(st)) {
                lam::MP n = f.m;
                Slot gen{std::function<pi::PP(Name)>([n, &st](Name z) {
                    Name w = fresh("w");
                    return proto(st.delta_c, z, {w}, trans::translate(n, st, w));
                })};
                return pi::nu(v, pi::par(co(dual_word(st.delta), u, {gen, Slot{v}}), rest));
            }
            Name z = fresh("z"), w = fresh("w");
            return pi::nu_all(
                {z, v}, pi::par({co(dual_word(st.delta), u, {Slot{z}, Slot{v}}),
                                 proto(st.delta_c, z, {w}, trans::translate(f.m, st, w)), rest}));
        }
        case CbnFrame::Split:
            return pi::nu(v, pi::par(proto(dual_word(st.delta), u, {f.x, f.y},
                                           trans::translate(f.m, st, v)),
                                     rest));
        case CbnFrame::Select: {
            Name a = fresh("a"), b = fresh("b");
            std::vector<pi::Branch> brs;
            brs.push_back({pi::Action{true, a, {f.x}}, trans::translate(f.m, st, v)});
            brs.push_back({pi::Action{true, b, {f.y}}, trans::translate(f.m2, st, v)});
            return pi::nu(v, pi::par(proto(dual_word(st.delta), u, {a, b},
                                           pi::choice(std::move(brs))),
                                     rest));
        }
    }
    fail("bad frame");
}

// Same for a call-by-value stack: j counts from the top (the frame the focus
// value meets first).
inline pi::PP cbv_cont_proc(const CbvCont& k, size_t j, const Name& u, const trans::Strategy& st) {
    using trans::co;
    using trans::dual_word;
    using trans::proto;
    using trans::Slot;
    if (j == k.fs.size()) return pi::fuse(u, k.anchor);
    const CbvFrame& f = k.fs[k.fs.size() - 1 - j];
    Name v = fresh("v");
    pi::PP rest = cbv_cont_proc(k, j + 1, v, st);
    switch (f.kind) {
        case CbvFrame::Fun: {
            Name x = fresh("x"), w = fresh("u");
            pi::PP wait = pi::nu(
                w, pi::par(trans::translate(f.m, st, w),
                           co(dual_word(st.delta), w, {Slot{x}, Slot{v}})));
            return pi::nu(v, pi::par(proto(dual_word(st.gamma_c), u, {x}, wait), rest));
        }
        case CbvFrame::ArgVal: {
            Name x = fresh("x");
            return pi::nu_all({v, x},
                              pi::par({value_clause(f.m, x, st),
                                       co(dual_word(st.delta), u, {Slot{x}, Slot{v}}), rest}));
        }
        case CbvFrame::Split:
            return pi::nu(v, pi::par(proto(dual_word(st.delta), u, {f.x, f.y},
                                           trans::translate(f.m, st, v)),
                                     rest));
        case CbvFrame::Select: {
            Name a = fresh("a"), b = fresh("b");
            std::vector<pi::Branch> brs;
            brs.push_back({pi::Action{true, a, {f.x}}, trans::translate(f.m, st, v)});
            brs.push_back({pi::Action{true, b, {f.y}}, trans::translate(f.m2, st, v)});
            return pi::nu(v, pi::par(proto(dual_word(st.delta), u, {a, b},
                                           pi::choice(std::move(brs))),
                                     rest));
        }
    }
    fail("bad frame");
}

template <typename State, typename ContProc>
inline pi::PP close_env(const State& s, pi::PP p, const trans::Strategy& st, ContProc cont) {
    for (size_t i = s.env.size(); i-- > 0;) {
        const auto& [a, kc] = s.env[i];
        p = pi::nu(a, pi::par(cont(kc, a, st), p));
    }
    return p;
}

inline pi::PP state_proc(const CbnState& s, const trans::Strategy& st) {
    Name u = fresh("u");
    pi::PP p = pi::nu(u, pi::par(trans::translate(s.focus, st, u), cbn_cont_proc(s.k, 0, u, st)));
    return close_env(s, p, st, [](const CbnCont& k, const Name& a, const trans::Strategy& s2) {
        return cbn_cont_proc(k, 0, a, s2);
    });
}

inline pi::PP state_proc(const CbvState& s, const trans::Strategy& st) {
    using trans::Slot;
    Name u = fresh("u");
    pi::PP core;
    if (!s.applying) {
        core = pi::par(trans::translate(s.focus, st, u), cbv_cont_proc(s.k, 0, u, st));
    } else {
        Name x = fresh("x"), y = fresh("y");
        core = pi::par(
            cbv_cont_proc(s.k, 0, u, st),
            pi::nu_all({x, y}, pi::par({value_clause(s.arg, x, st), value_clause(s.focus, y, st),
                                        trans::co(trans::dual_word(st.gamma), y,
                                                  {Slot{x}, Slot{u}})})));
    }
    pi::PP p = pi::nu(u, core);
    return close_env(s, p, st, [](const CbvCont& k, const Name& a, const trans::Strategy& s2) {
        return cbv_cont_proc(k, 0, a, s2);
    });
}

// ------------------------------------------------------------------- display

inline std::string show(const CbnFrame& f) {
    switch (f.kind) {
        case CbnFrame::Arg:
            return "arg(" + lam::to_string(f.m) + ")";
        case CbnFrame::Split:
            return "split(" + debug_str(f.x) + "," + debug_str(f.y) + " -> " + lam::to_string(f.m) + ")";
        case CbnFrame::Select:
            return "branch(" + debug_str(f.x) + " -> " + lam::to_string(f.m) + " | " +
                   debug_str(f.y) + " -> " + lam::to_string(f.m2) + ")";
    }
    fail("bad frame");
}

inline std::string show(const CbvFrame& f) {
    switch (f.kind) {
        case CbvFrame::Fun:
            return "fun(" + lam::to_string(f.m) + ")";
        case CbvFrame::ArgVal:
            return "val(" + lam::to_string(f.m) + ")";
        case CbvFrame::Split:
            return "split(" + debug_str(f.x) + "," + debug_str(f.y) + " -> " + lam::to_string(f.m) + ")";
        case CbvFrame::Select:
            return "branch(" + debug_str(f.x) + " -> " + lam::to_string(f.m) + " | " +
                   debug_str(f.y) + " -> " + lam::to_string(f.m2) + ")";
    }
    fail("bad frame");
}

inline std::string show(const CbnState& s) {
    std::string r = lam::to_string(s.focus) + " ||";
    for (const auto& f : s.k.fs) r += " " + show(f) + " .";
    r += " " + debug_str(s.k.anchor);
    for (const auto& [a, kc] : s.env) {
        r += "  [" + debug_str(a) + " :=";
        for (const auto& f : kc.fs) r += " " + show(f) + " .";
        r += " " + debug_str(kc.anchor) + "]";
    }
    return r;
}

inline std::string show(const CbvState& s) {
    std::string r;
    r += debug_str(s.k.anchor);
    for (const auto& f : s.k.fs) r += " . " + show(f);
    r += " || ";
    if (s.applying)
        r += "(" + lam::to_string(s.focus, 2) + " @ " + lam::to_string(s.arg, 2) + ")";
    else
        r += lam::to_string(s.focus);
    for (const auto& [a, kc] : s.env) {
        r += "  [" + debug_str(a) + " :=";
        for (const auto& f : kc.fs) r += " . " + show(f);
        r += " " + debug_str(kc.anchor) + "]";
    }
    return r;
}

// ------------------------------------------------------------------- facade

// One machine, picked by the strategy's evaluation order.
struct Machine {
    trans::Strategy st;
    bool by_name = true;
    CbnState n;
    CbvState v;

    static Machine load(const lam::MP& t, const trans::Strategy& st, const Name& tail) {
        Machine m;
        m.st = st;
        m.by_name = trans::call_by_name(st);
        if (m.by_name)
            m.n = cbn_load(t, tail);
        else
            m.v = cbv_load(t, tail);
        return m;
    }

    std::optional<StepInfo> step() { return by_name ? cbn_step(n, st) : cbv_step(v, st); }

    std::string terminal_kind() const {
        return by_name ? cbn_terminal_kind(n) : cbv_terminal_kind(v);
    }

    pi::PP process() const { return by_name ? state_proc(n, st) : state_proc(v, st); }

    std::string show() const { return by_name ? mach::show(n) : mach::show(v); }
};

}  // namespace fuspi::mach
