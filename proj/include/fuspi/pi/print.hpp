#pragma once

#include "fuspi/pi/ops.hpp"

namespace fuspi::pi {

// Printing picks readable spellings for binders: the base spelling when it is
// not taken by a name free in the scope, otherwise primes are appended. Output
// re-parses to an alpha-equal process.
namespace detail {

struct Printer {
    std::map<Name, std::string> display;

    std::string show(const Name& n) const {
        auto it = display.find(n);
        if (it != display.end()) return it->second;
        if (n.uid == 0) return base_spelling(n);
        return base_spelling(n) + "#" + std::to_string(n.uid);
    }

    std::string pick(const Name& b, const NameSet& fv, const std::set<std::string>& extra) {
        std::set<std::string> taken = extra;
        for (auto& n : fv)
            if (!(n == b)) taken.insert(show(n));
        std::string s = base_spelling(b);
        if (s.empty()) s = "x";
        while (taken.count(s) || s == "nu") s += "'";
        return s;
    }

    void bind(const Name& b, const PP& scope, std::set<std::string>& siblings) {
        std::string s = pick(b, free_names(scope), siblings);
        siblings.insert(s);
        display[b] = s;
    }

    void go(const PP& p, int ctx, std::string& out) {
        int prec = node_prec(p);
        bool wrap = prec < ctx;
        if (wrap) out += "(";
        switch (p->kind) {
            case PKind::Nil:
                out += "1";
                break;
            case PKind::Par: {
                bool first = true;
                for (auto& c : p->children) {
                    if (!first) out += " | ";
                    first = false;
                    go(c, 1, out);
                }
                break;
            }
            case PKind::New: {
                Printer inner = *this;
                std::set<std::string> sibs;
                inner.bind(p->name_a, p->body, sibs);
                out += "nu " + inner.display[p->name_a] + ". ";
                inner.go(p->body, 2, out);
                break;
            }
            case PKind::Fuse:
                out += show(p->name_a) + " ~ " + show(p->name_b);
                break;
            case PKind::Act:
            case PKind::Repl: {
                if (p->kind == PKind::Repl) out += "!";
                Printer inner = *this;
                inner.action(p->act, p->body, out);
                out += ".";
                inner.go(p->body, 2, out);
                break;
            }
            case PKind::Choice: {
                bool first = true;
                for (auto& br : p->branches) {
                    if (!first) out += " + ";
                    first = false;
                    Printer inner = *this;
                    inner.action(br.act, br.body, out);
                    out += ".";
                    inner.go(br.body, 2, out);
                }
                break;
            }
            case PKind::MacroOut: {
                out += "'" + show(p->subj) + "<";
                bool first = true;
                for (auto& x : p->payload) {
                    if (!first) out += ",";
                    first = false;
                    out += show(x);
                }
                out += ">";
                break;
            }
        }
        if (wrap) out += ")";
    }

    void action(const Action& a, const PP& scope, std::string& out) {
        if (!a.input) out += "'";
        out += show(a.subj) + "(";
        std::set<std::string> sibs;
        bool first = true;
        for (auto& b : a.binders) {
            bind(b, scope, sibs);
            if (!first) out += ",";
            first = false;
            out += display[b];
        }
        out += ")";
    }

    static int node_prec(const PP& p) {
        switch (p->kind) {
            case PKind::Par: return 0;
            case PKind::Choice: return 1;
            case PKind::New:
            case PKind::Act:
            case PKind::Repl: return 2;
            default: return 3;
        }
    }
};

}  // namespace detail

inline std::string to_string(const PP& p) {
    std::string out;
    detail::Printer pr;
    pr.go(p, 0, out);
    return out;
}

inline std::string to_string(const Action& a) {
    std::string out;
    detail::Printer pr;
    // A bare action has no scope to consider; show binders as written.
    if (!a.input) out += "'";
    out += pr.show(a.subj) + "(";
    bool first = true;
    for (auto& b : a.binders) {
        if (!first) out += ",";
        first = false;
        out += pr.show(b);
    }
    out += ")";
    return out;
}

}  // namespace fuspi::pi
