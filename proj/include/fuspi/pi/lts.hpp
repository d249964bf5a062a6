#pragma once

#include "fuspi/pi/normalize.hpp"
#include "fuspi/pi/unify.hpp"

namespace fuspi::pi {

// Transition labels. Visible actions carry the set of names the subject is
// fused with at the observation level (hidden names are dropped; an action
// whose class empties is unobservable). A conditional step [u~v] carries the
// unordered pair of classes; it becomes a real tau once the classes touch.
struct Label {
    enum class Kind { In, Out, Cond, Tau } kind = Kind::Tau;
    NameSet cls, cls2;
    NameVec binders;

    bool visible() const { return kind == Kind::In || kind == Kind::Out; }
};

struct Transition {
    Label label;
    PP target;
};

inline std::string label_key(const Label& l) {
    std::string s;
    switch (l.kind) {
        case Label::Kind::In: s = "in:"; break;
        case Label::Kind::Out: s = "out:"; break;
        case Label::Kind::Cond: s = "cond:"; break;
        case Label::Kind::Tau: return "tau";
    }
    auto cls_str = [](const NameSet& c) {
        std::string r = "{";
        for (auto& n : c) r += base_spelling(n) + "#" + std::to_string(n.uid) + ",";
        return r + "}";
    };
    if (l.kind == Label::Kind::Cond) {
        std::string a = cls_str(l.cls), b = cls_str(l.cls2);
        if (b < a) std::swap(a, b);
        return s + a + b;
    }
    return s + cls_str(l.cls) + "/" + std::to_string(l.binders.size());
}

inline std::string label_display(const Label& l) {
    auto pick = [](const NameSet& c) -> std::string {
        for (auto& n : c)
            if (n.uid == 0) return base_spelling(n);
        return c.empty() ? "?" : base_spelling(*c.begin());
    };
    switch (l.kind) {
        case Label::Kind::Tau:
            return "tau";
        case Label::Kind::Cond:
            return "[" + pick(l.cls) + "~" + pick(l.cls2) + "]";
        default: {
            std::string s = l.kind == Label::Kind::Out ? "'" : "";
            s += pick(l.cls) + "(";
            for (size_t i = 0; i < l.binders.size(); ++i) {
                if (i) s += ",";
                s += "b" + std::to_string(i);
            }
            return s + ")";
        }
    }
}

namespace detail {

inline NameSet extend_class(const NameSet& cls, UnionFind& uf, std::map<Name, NameVec>& classes) {
    NameSet out = cls;
    for (auto& m : cls) {
        auto it = classes.find(uf.find(m));
        if (it != classes.end())
            for (auto& n : it->second) out.insert(n);
    }
    return out;
}

inline void trans_rec(const PP& p, std::vector<Transition>& out);

inline void act_transition(const Action& a, const PP& body, std::vector<Transition>& out) {
    Label l;
    l.kind = a.input ? Label::Kind::In : Label::Kind::Out;
    l.cls = {a.subj};
    l.binders = a.binders;
    out.push_back({l, body});
}

inline void trans_rec(const PP& p, std::vector<Transition>& out) {
    switch (p->kind) {
        case PKind::Nil:
        case PKind::Fuse:
            return;
        case PKind::MacroOut:
            trans_rec(expand_one_macro(p->subj, p->payload), out);
            return;
        case PKind::Act:
            act_transition(p->act, p->body, out);
            return;
        case PKind::Repl: {
            // one lazy unfold: !a.p  --a-->  p | !a.p
            act_transition(p->act, par(p->body, rename_apart(p)), out);
            return;
        }
        case PKind::Choice: {
            for (auto& br : p->branches) act_transition(br.act, br.body, out);
            return;
        }
        case PKind::New: {
            std::vector<Transition> inner;
            trans_rec(p->body, inner);
            Name z = p->name_a;
            for (auto& t : inner) {
                Label l = t.label;
                if (l.visible()) {
                    l.cls.erase(z);
                    if (l.cls.empty()) continue;
                } else if (l.kind == Label::Kind::Cond) {
                    l.cls.erase(z);
                    l.cls2.erase(z);
                    if (l.cls.empty() || l.cls2.empty()) continue;
                }
                out.push_back({l, nu(z, t.target)});
            }
            return;
        }
        case PKind::Par: {
            const auto& cs = p->children;
            std::vector<std::vector<Transition>> per;
            per.reserve(cs.size());
            for (auto& c : cs) {
                std::vector<Transition> ts;
                trans_rec(c, ts);
                per.push_back(std::move(ts));
            }
            std::vector<Transition> here;
            auto in_context = [&](size_t i, const PP& t) {
                std::vector<PP> kids = cs;
                kids[i] = t;
                return par(std::move(kids));
            };
            for (size_t i = 0; i < cs.size(); ++i)
                for (auto& t : per[i]) here.push_back({t.label, in_context(i, t.target)});

            // communication: an output and an input of equal arity combine
            // into a conditional step on their subject classes
            for (size_t i = 0; i < cs.size(); ++i) {
                for (size_t j = 0; j < cs.size(); ++j) {
                    if (i == j) continue;
                    for (auto& to : per[i]) {
                        if (to.label.kind != Label::Kind::Out) continue;
                        for (auto& ti : per[j]) {
                            if (ti.label.kind != Label::Kind::In) continue;
                            if (ti.label.binders.size() != to.label.binders.size()) continue;
                            NameVec common;
                            for (size_t k = 0; k < to.label.binders.size(); ++k)
                                common.push_back(fresh("c" + std::to_string(k)));
                            Subst so, si;
                            for (size_t k = 0; k < common.size(); ++k) {
                                so[to.label.binders[k]] = common[k];
                                si[ti.label.binders[k]] = common[k];
                            }
                            std::vector<PP> kids = cs;
                            kids[i] = substitute(to.target, so);
                            kids[j] = substitute(ti.target, si);
                            Label l;
                            l.kind = Label::Kind::Cond;
                            l.cls = to.label.cls;
                            l.cls2 = ti.label.cls;
                            here.push_back({l, nu_all(common, par(std::move(kids)))});
                        }
                    }
                }
            }

            UnionFind uf;
            unguarded_fusions(p, uf);
            auto classes = uf.classes();
            for (auto& t : here) {
                Label l = t.label;
                if (l.visible()) {
                    l.cls = extend_class(l.cls, uf, classes);
                } else if (l.kind == Label::Kind::Cond) {
                    l.cls = extend_class(l.cls, uf, classes);
                    l.cls2 = extend_class(l.cls2, uf, classes);
                }
                out.push_back({l, t.target});
                if (l.kind == Label::Kind::Cond) {
                    bool touch = false;
                    for (auto& n : l.cls)
                        if (l.cls2.count(n)) touch = true;
                    if (touch) out.push_back({Label{}, t.target});
                }
            }
            return;
        }
    }
}

}  // namespace detail

// All single-step transitions, deduplicated by label and target shape. Binder
// names in visible labels are fresh; the target has them free.
inline std::vector<Transition> transitions(const PP& p0) {
    PP p = rename_apart(p0);
    std::vector<Transition> raw;
    detail::trans_rec(p, raw);
    std::vector<Transition> out;
    std::set<std::string> seen;
    for (auto& t : raw) {
        // canonicalize exposed binders so duplicates collapse
        Transition u = t;
        if (u.label.visible()) {
            Subst s;
            NameVec canon;
            for (size_t k = 0; k < u.label.binders.size(); ++k) {
                Name c = mkname("@b" + std::to_string(k));
                s[u.label.binders[k]] = c;
                canon.push_back(c);
            }
            u.label.binders = canon;
            u.target = substitute(u.target, s);
        }
        std::string key = label_key(u.label) + "|" + normal_key(u.target);
        if (seen.insert(key).second) out.push_back(std::move(u));
    }
    return out;
}

// One-step reduction: the tau-transitions, with targets put in normal form.
inline std::vector<PP> reduce(const PP& p) {
    std::vector<PP> out;
    std::set<std::string> seen;
    for (auto& t : transitions(p)) {
        if (t.label.kind != Label::Kind::Tau) continue;
        PP q = congruence_normalize(t.target);
        if (seen.insert(canonical_key(q)).second) out.push_back(q);
    }
    return out;
}

}  // namespace fuspi::pi
