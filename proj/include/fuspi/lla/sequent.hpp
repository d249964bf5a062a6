#pragma once

#include "fuspi/lla/formula.hpp"

namespace fuspi::lla {

// One typed interface point: a vector of channel names against a formula,
// with as many names as the formula's arity.
struct Entry {
    NameVec names;
    FP formula;
};

struct Sequent {
    std::vector<Entry> entries;
};

inline bool alpha_equal(const Sequent& a, const Sequent& b) {
    if (a.entries.size() != b.entries.size()) return false;
    for (size_t i = 0; i < a.entries.size(); ++i) {
        if (a.entries[i].names != b.entries[i].names) return false;
        if (!alpha_equal(a.entries[i].formula, b.entries[i].formula)) return false;
    }
    return true;
}

inline void validate(const Sequent& s, const ArityCtx& ctx, const char* where) {
    NameSet seen;
    for (auto& e : s.entries) {
        int ar = arity(e.formula, ctx);
        if (static_cast<int>(e.names.size()) != ar)
            fail(where, ": entry has ", e.names.size(), " names but formula ", to_string(e.formula),
                 " has arity ", ar);
        for (auto& n : e.names) {
            if (!seen.insert(n).second)
                fail(where, ": name ", base_spelling(n), " appears twice in the sequent");
        }
    }
}

inline std::string names_str(const NameVec& ns) {
    std::string s;
    for (size_t i = 0; i < ns.size(); ++i) {
        if (i) s += ",";
        s += base_spelling(ns[i]);
        if (ns[i].uid) s += "#" + std::to_string(ns[i].uid);
    }
    return s;
}

inline std::string to_string(const Sequent& s) {
    std::string out = "|-";
    for (size_t i = 0; i < s.entries.size(); ++i) {
        out += i ? ", " : " ";
        out += names_str(s.entries[i].names) + " : " + to_string(s.entries[i].formula);
    }
    return out;
}

}  // namespace fuspi::lla
