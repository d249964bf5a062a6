#pragma once

#include "fuspi/pi/lts.hpp"

namespace fuspi::pi {

namespace detail {

inline bool sets_touch(const NameSet& a, const NameSet& b) {
    for (auto& n : a)
        if (b.count(n)) return true;
    return false;
}

inline bool label_match(const Label& a, const Label& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Label::Kind::Tau:
            return true;
        case Label::Kind::Cond:
            return (sets_touch(a.cls, b.cls) && sets_touch(a.cls2, b.cls2)) ||
                   (sets_touch(a.cls, b.cls2) && sets_touch(a.cls2, b.cls));
        default:
            return a.binders.size() == b.binders.size() && sets_touch(a.cls, b.cls);
    }
}

struct BisimChecker {
    Budget budget;
    std::set<std::pair<std::string, std::string>> assumed;
    std::map<std::pair<std::string, std::string>, Verdict> definite;

    static std::pair<std::string, std::string> pair_key(const std::string& a, const std::string& b) {
        return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    }

    Verdict run(const PP& p, const PP& q, int depth) {
        PP np = congruence_normalize(p);
        PP nq = congruence_normalize(q);
        std::string kp = canonical_key(np), kq = canonical_key(nq);
        if (kp == kq) return Verdict::Yes;
        auto key = pair_key(kp, kq);
        auto it = definite.find(key);
        if (it != definite.end()) return it->second;
        if (assumed.count(key)) return Verdict::Yes;

        if (fusion_classes_on_free(np) != fusion_classes_on_free(nq)) {
            definite[key] = Verdict::No;
            return Verdict::No;
        }
        if (depth <= 0) return Verdict::Unknown;

        assumed.insert(key);
        Verdict result = Verdict::Yes;
        auto tp = transitions(np);
        auto tq = transitions(nq);
        for (int dir = 0; dir < 2 && result != Verdict::No; ++dir) {
            auto& src = dir == 0 ? tp : tq;
            auto& dst = dir == 0 ? tq : tp;
            for (auto& t : src) {
                Verdict best = Verdict::No;
                for (auto& c : dst) {
                    if (!label_match(t.label, c.label)) continue;
                    Verdict sub = run(t.target, c.target, depth - 1);
                    if (sub == Verdict::Yes) {
                        best = Verdict::Yes;
                        break;
                    }
                    if (sub == Verdict::Unknown) best = Verdict::Unknown;
                }
                if (best == Verdict::No) {
                    result = Verdict::No;
                    break;
                }
                if (best == Verdict::Unknown) result = Verdict::Unknown;
            }
        }
        assumed.erase(key);
        // "no" never rests on a coinductive assumption, so it can be kept;
        // "yes" under open assumptions must stay local to this search
        if (result == Verdict::No) definite[key] = result;
        return result;
    }
};

}  // namespace detail

inline Verdict bisimilar(const PP& p, const PP& q, const Budget& budget = {}) {
    detail::BisimChecker c;
    c.budget = budget;
    return c.run(p, q, budget.bisim_depth);
}

}  // namespace fuspi::pi
