#pragma once

#include <functional>
#include <variant>

#include "fuspi/pi/ops.hpp"
#include "fuspi/trans/strategy.hpp"

namespace fuspi::trans {

// One protocol step on channel c carrying the given payload.
inline pi::PP atomic_prefix(char letter, Name c, NameVec payload, pi::PP body) {
    switch (letter) {
        case 'v': return pi::input(c, std::move(payload), std::move(body));
        case '^':
        case '?': return pi::output(c, std::move(payload), std::move(body));
        case '!': return pi::repl(pi::Action{true, c, std::move(payload)}, std::move(body));
    }
    fail("bad protocol letter");
}

// proto(w, c, xs, p) runs the word w on channel c, one fresh relay channel per
// letter, and hands the payload xs to the final step whose continuation is p.
// An empty word means "p already speaks on its single payload name": we alias
// that name to c.
inline pi::PP proto(const std::string& w, Name c, const NameVec& xs, pi::PP p) {
    if (w.empty()) {
        if (xs.size() != 1) fail("empty protocol word needs exactly one payload name");
        return pi::substitute(p, pi::Subst{{xs[0], c}});
    }
    if (w.size() == 1) return atomic_prefix(w[0], c, xs, std::move(p));
    Name relay = fresh("p");
    return atomic_prefix(w[0], c, {relay}, proto(w.substr(1), relay, xs, std::move(p)));
}

// A slot of the co protocol: either an existing name to fuse with the payload
// name received at that position, or a generator that serves the payload name.
using Slot = std::variant<Name, std::function<pi::PP(Name)>>;

// co(w, c, slots) is the matching consumer for a protocol of word dual(w)
// rooted at c. It runs w down to its last letter and there either emits the
// free-output macro (all slots plain names, final step an output) or binds
// fresh payload names and connects each slot.
inline pi::PP co(const std::string& w, Name c, const std::vector<Slot>& slots) {
    if (w.empty()) {
        if (slots.size() != 1) fail("empty co word needs exactly one slot");
        if (auto* n = std::get_if<Name>(&slots[0])) return pi::fuse(c, *n);
        return std::get<std::function<pi::PP(Name)>>(slots[0])(c);
    }
    if (w.size() > 1) {
        Name relay = fresh("q");
        return atomic_prefix(w[0], c, {relay}, co(w.substr(1), relay, slots));
    }
    char letter = w[0];
    bool all_names = true;
    for (const auto& s : slots)
        if (!std::holds_alternative<Name>(s)) all_names = false;
    if (all_names && output_polarity(letter)) {
        NameVec xs;
        for (const auto& s : slots) xs.push_back(std::get<Name>(s));
        return pi::macro_out(c, std::move(xs));
    }
    NameVec payload;
    std::vector<pi::PP> parts;
    for (const auto& s : slots) {
        Name y = fresh("y");
        payload.push_back(y);
        if (auto* n = std::get_if<Name>(&s)) {
            parts.push_back(pi::fuse(*n, y));
        } else {
            parts.push_back(std::get<std::function<pi::PP(Name)>>(s)(y));
        }
    }
    return atomic_prefix(letter, c, std::move(payload), pi::par(std::move(parts)));
}

}  // namespace fuspi::trans
