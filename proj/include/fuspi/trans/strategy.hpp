#pragma once

#include "fuspi/lla/formula.hpp"

namespace fuspi::trans {

// A strategy is a pair of modality words (gamma for values, delta for general
// terms) where one word is a suffix of the other. The leftover prefixes
// (gamma_c, delta_c) are the protocol fragments run by whichever side speaks
// first. Words read head letter first, matching lla::wrap_word.
struct Strategy {
    std::string name;
    std::string gamma;
    std::string delta;
    std::string gamma_c;  // delta = gamma_c + gamma when gamma is the suffix
    std::string delta_c;  // gamma = delta_c + delta when delta is the suffix
    bool classical = false;
    bool simply = false;  // arity-translation for the simply typed fragment
};

inline char dual_letter(char c) {
    switch (c) {
        case '!': return '?';
        case '?': return '!';
        case 'v': return '^';
        case '^': return 'v';
    }
    fail("bad modality letter '", std::string(1, c), "'");
}

inline std::string dual_word(const std::string& w) {
    std::string r;
    for (char c : w) r += dual_letter(c);
    return r;
}

inline bool input_polarity(char c) { return c == 'v' || c == '!'; }
inline bool output_polarity(char c) { return c == '^' || c == '?'; }

inline bool is_suffix(const std::string& suf, const std::string& w) {
    return suf.size() <= w.size() && w.compare(w.size() - suf.size(), suf.size(), suf) == 0;
}

inline Strategy make_strategy(std::string name, std::string gamma, std::string delta) {
    for (char c : gamma + delta) dual_letter(c);
    if (gamma.empty() || delta.empty()) fail("strategy words must be non-empty");
    if (gamma[0] != '!') fail("the value word must start with '!' so variables can be shared");
    Strategy s;
    s.name = std::move(name);
    s.gamma = std::move(gamma);
    s.delta = std::move(delta);
    if (is_suffix(s.delta, s.gamma)) {
        s.delta_c = s.gamma.substr(0, s.gamma.size() - s.delta.size());
    } else if (is_suffix(s.gamma, s.delta)) {
        s.gamma_c = s.delta.substr(0, s.delta.size() - s.gamma.size());
    } else {
        fail("strategy words must overlap: one must be a suffix of the other");
    }
    s.classical = s.delta[0] == '?';
    return s;
}

inline const std::vector<Strategy>& strategies() {
    static const std::vector<Strategy> all = [] {
        std::vector<Strategy> v;
        v.push_back(make_strategy("cbn-classical", "!?", "?"));
        v.push_back(make_strategy("cbn-int", "!v", "v"));
        v.push_back(make_strategy("cbv-classical", "!", "?!"));
        v.push_back(make_strategy("cbv-int", "!", "!"));
        Strategy simple;
        simple.name = "simply";
        simple.simply = true;
        v.push_back(simple);
        return v;
    }();
    return all;
}

inline const Strategy& strategy_named(const std::string& name) {
    for (const auto& s : strategies())
        if (s.name == name) return s;
    fail("unknown strategy '", name, "' (try cbn-classical, cbn-int, cbv-classical, cbv-int, simply)");
}

// Arguments suspended behind a server mean the function drives evaluation.
inline bool call_by_name(const Strategy& s) { return !s.delta_c.empty(); }

// The application clause can skip its intermediate channel when the function
// side owns the whole protocol and the last step towards the argument is an
// input, so the argument server can sit directly in the consumer.
inline bool inline_application(const Strategy& s) {
    return s.gamma_c.empty() && input_polarity(dual_letter(s.delta.back()));
}

}  // namespace fuspi::trans
