#pragma once

#include "fuspi/common.hpp"

namespace fuspi::pi {

// Prefixes. An input u(x...) receives, a binding output 'u(x...) sends fresh
// names; both bind their parameter list in the continuation.
struct Action {
    bool input = true;
    Name subj;
    NameVec binders;

    friend bool operator==(const Action& a, const Action& b) {
        return a.input == b.input && a.subj == b.subj && a.binders == b.binders;
    }
};

struct Process;
using PP = std::shared_ptr<const Process>;

enum class PKind {
    Nil,       // 1
    Par,       // p | q | ...
    New,       // nu x. p
    Fuse,      // x ~ y
    Act,       // alpha.p
    Repl,      // !alpha.p
    Choice,    // u1(xs).p1 + u2(ys).p2 + ...
    MacroOut,  // 'u<xs>, shorthand for 'u(ys).(x1~y1 | ... | xn~yn)
};

struct Branch {
    Action act;  // input-guarded
    PP body;
};

struct Process {
    PKind kind;
    std::vector<PP> children;     // Par
    Name name_a, name_b;          // New binder / Fuse pair
    PP body;                      // New, Act, Repl
    Action act;                   // Act, Repl
    std::vector<Branch> branches; // Choice
    Name subj;                    // MacroOut
    NameVec payload;              // MacroOut
};

inline PP make(Process&& p) { return std::make_shared<const Process>(std::move(p)); }

inline PP nil() {
    static PP one = make({PKind::Nil, {}, {}, {}, nullptr, {}, {}, {}, {}});
    return one;
}

inline PP par(std::vector<PP> children) {
    std::vector<PP> flat;
    for (auto& c : children) {
        if (c->kind == PKind::Par) {
            for (auto& g : c->children) flat.push_back(g);
        } else if (c->kind != PKind::Nil) {
            flat.push_back(c);
        }
    }
    if (flat.empty()) return nil();
    if (flat.size() == 1) return flat[0];
    Process p{PKind::Par, {}, {}, {}, nullptr, {}, {}, {}, {}};
    p.children = std::move(flat);
    return make(std::move(p));
}

inline PP par(PP a, PP b) { return par(std::vector<PP>{a, b}); }

inline PP nu(const Name& x, PP body) {
    Process p{PKind::New, {}, {}, {}, nullptr, {}, {}, {}, {}};
    p.name_a = x;
    p.body = body;
    return make(std::move(p));
}

inline PP nu_all(const NameVec& xs, PP body) {
    PP r = body;
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) r = nu(*it, r);
    return r;
}

inline PP fuse(const Name& x, const Name& y) {
    Process p{PKind::Fuse, {}, {}, {}, nullptr, {}, {}, {}, {}};
    p.name_a = x;
    p.name_b = y;
    return make(std::move(p));
}

inline PP act(const Action& a, PP body) {
    Process p{PKind::Act, {}, {}, {}, nullptr, {}, {}, {}, {}};
    p.act = a;
    p.body = body;
    return make(std::move(p));
}

inline PP input(const Name& u, const NameVec& xs, PP body) {
    return act(Action{true, u, xs}, body);
}

inline PP output(const Name& u, const NameVec& xs, PP body) {
    return act(Action{false, u, xs}, body);
}

inline PP repl(const Action& a, PP body) {
    Process p{PKind::Repl, {}, {}, {}, nullptr, {}, {}, {}, {}};
    p.act = a;
    p.body = body;
    return make(std::move(p));
}

inline PP choice(std::vector<Branch> branches) {
    if (branches.size() == 1) return act(branches[0].act, branches[0].body);
    Process p{PKind::Choice, {}, {}, {}, nullptr, {}, {}, {}, {}};
    p.branches = std::move(branches);
    return make(std::move(p));
}

inline PP macro_out(const Name& u, const NameVec& xs) {
    Process p{PKind::MacroOut, {}, {}, {}, nullptr, {}, {}, {}, {}};
    p.subj = u;
    p.payload = xs;
    return make(std::move(p));
}

}  // namespace fuspi::pi
