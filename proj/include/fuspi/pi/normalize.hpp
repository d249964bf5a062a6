#pragma once

#include "fuspi/pi/ops.hpp"

#include <algorithm>
#include <cstdio>

namespace fuspi::pi {

namespace detail {

struct UnionFind {
    std::map<Name, Name> parent;

    Name find(const Name& n) {
        auto it = parent.find(n);
        if (it == parent.end()) return n;
        Name r = find(it->second);
        parent[n] = r;
        return r;
    }
    void unite(const Name& a, const Name& b) {
        Name ra = find(a), rb = find(b);
        if (ra == rb) return;
        // deterministic: smaller name becomes the root
        if (rb < ra) std::swap(ra, rb);
        parent[rb] = ra;
    }
    std::map<Name, NameVec> classes() {
        std::map<Name, NameVec> out;
        NameVec keys;
        for (auto& [n, _] : parent) keys.push_back(n);
        for (auto& n : keys) out[find(n)].push_back(n);
        for (auto& [r, members] : out) {
            if (!contains(members, r)) members.push_back(r);
            std::sort(members.begin(), members.end());
        }
        return out;
    }
};

// Splits one scope into its nu-binders and parallel items, descending through
// Par and New only (prefix bodies are separate scopes).
inline void collect_scope(const PP& p, NameVec& binders, std::vector<PP>& items) {
    switch (p->kind) {
        case PKind::Nil:
            return;
        case PKind::Par:
            for (auto& c : p->children) collect_scope(c, binders, items);
            return;
        case PKind::New:
            binders.push_back(p->name_a);
            collect_scope(p->body, binders, items);
            return;
        default:
            items.push_back(p);
            return;
    }
}

inline std::string pad(uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%012llu", static_cast<unsigned long long>(v));
    return buf;
}

// Positional codes make every ordering decision independent of the actual
// identity of bound names: enclosing binders are coded by binding position,
// genuinely free names by spelling.
using Codes = std::map<Name, std::string>;

inline std::string code_of(const Codes& env, const Name& n) {
    auto it = env.find(n);
    if (it != env.end()) return it->second;
    return "f:" + base_spelling(n) + "#" + pad(n.uid);
}

// Serialization that erases bound-name identity; used both as the memo key of
// a canonical form and as the ordering key while sorting parallel items.
struct KeySer {
    Codes env;
    int next = 0;

    std::string code(const Name& n) const { return code_of(env, n); }
    void bind(const Name& n) { env[n] = "b" + pad(static_cast<uint64_t>(next++)); }

    void act(const Action& a, std::string& out) {
        out += a.input ? "i " : "o ";
        out += code(a.subj);
        out += "(";
        for (auto& b : a.binders) {
            bind(b);
            out += env[b] + " ";
        }
        out += ")";
    }

    void go(const PP& p, std::string& out) {
        switch (p->kind) {
            case PKind::Nil:
                out += "0";
                return;
            case PKind::Par: {
                out += "(|";
                for (auto& c : p->children) {
                    out += " ";
                    go(c, out);
                }
                out += ")";
                return;
            }
            case PKind::New: {
                KeySer inner = *this;
                inner.bind(p->name_a);
                out += "(nu ";
                inner.go(p->body, out);
                out += ")";
                return;
            }
            case PKind::Fuse:
                out += "(~ " + code(p->name_a) + " " + code(p->name_b) + ")";
                return;
            case PKind::Act:
            case PKind::Repl: {
                out += p->kind == PKind::Repl ? "(rep " : "(act ";
                KeySer inner = *this;
                inner.act(p->act, out);
                out += " ";
                inner.go(p->body, out);
                out += ")";
                return;
            }
            case PKind::Choice: {
                out += "(sum";
                for (auto& br : p->branches) {
                    out += " [";
                    KeySer inner = *this;
                    inner.act(br.act, out);
                    out += " ";
                    inner.go(br.body, out);
                    out += "]";
                }
                out += ")";
                return;
            }
            case PKind::MacroOut: {
                out += "(mac " + code(p->subj) + " <";
                for (auto& x : p->payload) out += code(x) + " ";
                out += ">)";
                return;
            }
        }
    }
};

inline std::string key_with_env(const PP& p, const Codes& env) {
    KeySer s;
    s.env = env;
    std::string out;
    s.go(p, out);
    return out;
}

// One scope of the normal form: fusion saturation + equator absorption, then
// a canonical ordering of items and binders, then recursion into the bodies.
// level tags the codes of this scope's binder group.
inline PP normalize_scope(const PP& p, const Codes& env, int level) {
    NameVec binders;
    std::vector<PP> items;
    collect_scope(p, binders, items);
    NameSet bound(binders.begin(), binders.end());

    UnionFind uf;
    std::vector<PP> rest;
    for (auto& it : items) {
        if (it->kind == PKind::Fuse) {
            uf.unite(it->name_a, it->name_b);
        } else {
            rest.push_back(it);
        }
    }

    // Every member occurrence is rewritten to the class representative; nu
    // binders absorbed into their class disappear, and classes keep a star of
    // equators over their remaining visible members.
    Subst sigma;
    std::vector<PP> stars;
    NameSet absorbed;
    for (auto& [root, members] : uf.classes()) {
        NameVec visible;
        for (auto& m : members)
            if (!bound.count(m)) visible.push_back(m);
        std::sort(visible.begin(), visible.end(), [&](const Name& a, const Name& b) {
            return code_of(env, a) < code_of(env, b);
        });
        Name rep = visible.empty() ? members.front() : visible.front();
        for (auto& m : members) {
            if (m == rep) continue;
            sigma[m] = rep;
            if (bound.count(m)) absorbed.insert(m);
        }
        for (auto& f : visible)
            if (!(f == rep)) stars.push_back(fuse(rep, f));
    }

    // Prefix bodies are normalized before the items are ordered, so ordering
    // keys see canonical subtrees. This scope's binders are coded
    // provisionally; they are numbered by first use after the sort below.
    std::string tag = "g" + pad(static_cast<uint64_t>(level)) + "_";
    Codes prov = env;
    for (auto& b : binders)
        if (!absorbed.count(b)) prov[b] = tag + "?";
    auto body_env = [&](const Codes& outer, const NameVec& prefix_binders) {
        Codes e = outer;
        int i = 0;
        for (auto& b : prefix_binders)
            e[b] = "g" + pad(static_cast<uint64_t>(level + 1)) + "_" + pad(static_cast<uint64_t>(i++));
        return e;
    };

    std::vector<PP> out_items;
    for (auto& it : rest) {
        PP q = sigma.empty() ? it : substitute(it, sigma);
        switch (q->kind) {
            case PKind::Act:
                q = act(q->act, normalize_scope(q->body, body_env(prov, q->act.binders), level + 2));
                break;
            case PKind::Repl:
                q = repl(q->act, normalize_scope(q->body, body_env(prov, q->act.binders), level + 2));
                break;
            case PKind::Choice: {
                std::vector<Branch> brs;
                for (auto& br : q->branches)
                    brs.push_back({br.act, normalize_scope(br.body, body_env(prov, br.act.binders), level + 2)});
                q = choice(std::move(brs));
                break;
            }
            default:
                break;
        }
        if (q->kind != PKind::Nil) out_items.push_back(q);
    }
    for (auto& s : stars) out_items.push_back(s);

    if (out_items.empty()) return nil();

    NameSet used;
    for (auto& it : out_items) fv_into(it, used, {});
    NameVec live;
    for (auto& b : binders)
        if (!absorbed.count(b) && used.count(b)) live.push_back(b);

    // Order items by identity-erased key; this scope's binders are numbered
    // by first use in that order, and the sort repeats until stable.
    Codes idx;
    for (int round = 0; round < 10; ++round) {
        Codes keyenv = env;
        for (auto& b : live) keyenv[b] = idx.count(b) ? idx[b] : tag + "?";
        std::vector<std::pair<std::string, PP>> keyed;
        for (auto& it : out_items) keyed.push_back({key_with_env(it, keyenv), it});
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        out_items.clear();
        for (auto& [k, it] : keyed) out_items.push_back(it);

        Codes next;
        int ctr = 0;
        NameSet liveset(live.begin(), live.end());
        std::function<void(const PP&)> scan = [&](const PP& q) {
            auto touch = [&](const Name& n) {
                if (liveset.count(n) && !next.count(n))
                    next[n] = tag + pad(static_cast<uint64_t>(ctr++));
            };
            switch (q->kind) {
                case PKind::Nil: return;
                case PKind::Par:
                    for (auto& c : q->children) scan(c);
                    return;
                case PKind::New:
                    scan(q->body);
                    return;
                case PKind::Fuse:
                    touch(q->name_a);
                    touch(q->name_b);
                    return;
                case PKind::Act:
                case PKind::Repl:
                    touch(q->act.subj);
                    scan(q->body);
                    return;
                case PKind::Choice:
                    for (auto& br : q->branches) {
                        touch(br.act.subj);
                        scan(br.body);
                    }
                    return;
                case PKind::MacroOut:
                    touch(q->subj);
                    for (auto& x : q->payload) touch(x);
                    return;
            }
        };
        for (auto& it : out_items) scan(it);
        if (next == idx) break;
        idx = next;
    }

    NameVec ordered = live;
    std::sort(ordered.begin(), ordered.end(),
              [&](const Name& a, const Name& b) { return idx[a] < idx[b]; });
    return nu_all(ordered, par(out_items));
}

}  // namespace detail

// Canonical representative of the structural-congruence class: output macros
// expanded, binders made unique, scopes maximally extruded, fusions saturated
// with hidden equators absorbed, parallel components canonically ordered.
inline PP congruence_normalize(const PP& p) {
    return detail::normalize_scope(rename_apart(expand_output_macro(p)), {}, 0);
}

// Identity-erased serialization; equal keys on normalized processes exactly
// capture alpha-equivalence.
inline std::string canonical_key(const PP& p) {
    return detail::key_with_env(p, {});
}

inline std::string normal_key(const PP& p) {
    return canonical_key(congruence_normalize(p));
}

}  // namespace fuspi::pi
