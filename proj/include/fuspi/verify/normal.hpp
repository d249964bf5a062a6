#pragma once

#include <string>
#include <vector>

#include "fuspi/pi/normalize.hpp"

// Comparison normal forms for the correspondence harness. Two cleanups sit on
// top of the structural-congruence normal form:
//
//  - garbage collection drops a parallel component whose head subjects are
//    restricted names nobody else mentions: such a prefix can never find a
//    peer, so it is strongly bisimilar to nothing;
//
//  - binding distribution undoes sharing: a restricted server whose channel is
//    only ever used as an output subject is copied into each client site. The
//    machine side substitutes terms and therefore carries one private server
//    per use site, while the process side keeps one shared server; both sides
//    meet in the fully distributed form.

namespace fuspi::verify {

inline void split_scope(const pi::PP& p, NameVec& binders, std::vector<pi::PP>& items) {
    if (p->kind == pi::PKind::New) {
        binders.push_back(p->name_a);
        split_scope(p->body, binders, items);
        return;
    }
    if (p->kind == pi::PKind::Par) {
        for (auto& c : p->children) split_scope(c, binders, items);
        return;
    }
    if (p->kind != pi::PKind::Nil) items.push_back(p);
}

inline NameVec head_subjects(const pi::PP& p) {
    switch (p->kind) {
        case pi::PKind::Act:
        case pi::PKind::Repl:
            return {p->act.subj};
        case pi::PKind::MacroOut:
            return {p->subj};
        case pi::PKind::Choice: {
            NameVec out;
            for (auto& b : p->branches) out.push_back(b.act.subj);
            return out;
        }
        default:
            return {};
    }
}

inline pi::PP admin_normalize(pi::PP p) {
    p = pi::congruence_normalize(p);
    for (int round = 0; round < 50; ++round) {
        NameVec binders;
        std::vector<pi::PP> items;
        split_scope(p, binders, items);
        NameSet bound(binders.begin(), binders.end());

        std::vector<NameSet> frees;
        frees.reserve(items.size());
        for (auto& it : items) frees.push_back(pi::free_names(it));

        std::vector<pi::PP> kept;
        bool dropped = false;
        for (size_t i = 0; i < items.size(); ++i) {
            NameVec subs = head_subjects(items[i]);
            bool dead = !subs.empty();
            for (auto& s : subs) {
                if (!bound.count(s)) {
                    dead = false;
                    break;
                }
                for (size_t j = 0; j < items.size() && dead; ++j)
                    if (j != i && frees[j].count(s)) dead = false;
                if (!dead) break;
            }
            if (dead)
                dropped = true;
            else
                kept.push_back(items[i]);
        }
        if (!dropped) break;
        p = pi::congruence_normalize(pi::nu_all(binders, pi::par(std::move(kept))));
    }
    return p;
}

namespace detail {

// True when every occurrence of z in p is as the subject of an output prefix.
inline bool only_output_subject(const pi::PP& p, const Name& z, int& clients) {
    switch (p->kind) {
        case pi::PKind::Nil:
            return true;
        case pi::PKind::Par: {
            for (auto& c : p->children)
                if (!only_output_subject(c, z, clients)) return false;
            return true;
        }
        case pi::PKind::New:
            return only_output_subject(p->body, z, clients);
        case pi::PKind::Fuse:
            return !(p->name_a == z || p->name_b == z);
        case pi::PKind::MacroOut: {
            for (auto& n : p->payload)
                if (n == z) return false;
            if (p->subj == z) ++clients;
            return true;
        }
        case pi::PKind::Act:
        case pi::PKind::Repl: {
            for (auto& n : p->act.binders)
                if (n == z) return false;
            if (p->act.subj == z) {
                if (p->act.input || p->kind == pi::PKind::Repl) return false;
                ++clients;
            }
            return only_output_subject(p->body, z, clients);
        }
        case pi::PKind::Choice: {
            for (auto& b : p->branches) {
                if (b.act.subj == z) return false;
                for (auto& n : b.act.binders)
                    if (n == z) return false;
                if (!only_output_subject(b.body, z, clients)) return false;
            }
            return true;
        }
    }
    return false;
}

// Rewrites each output prefix at z into a private copy of the server, working
// bottom up so nested clients are resolved before their site is wrapped.
inline pi::PP push_server(const pi::PP& p, const Name& z, const pi::PP& server) {
    switch (p->kind) {
        case pi::PKind::Nil:
        case pi::PKind::Fuse:
            return p;
        case pi::PKind::Par: {
            std::vector<pi::PP> cs;
            for (auto& c : p->children) cs.push_back(push_server(c, z, server));
            return pi::par(std::move(cs));
        }
        case pi::PKind::New:
            return pi::nu(p->name_a, push_server(p->body, z, server));
        case pi::PKind::MacroOut: {
            if (!(p->subj == z)) return p;
            Name z2 = freshen(z);
            return pi::nu(z2, pi::par(pi::macro_out(z2, p->payload),
                                      pi::substitute(server, {{z, z2}})));
        }
        case pi::PKind::Act: {
            pi::PP body = push_server(p->body, z, server);
            if (!(p->act.subj == z)) return pi::act(p->act, body);
            Name z2 = freshen(z);
            pi::Action a = p->act;
            a.subj = z2;
            return pi::nu(z2, pi::par(pi::act(a, body), pi::substitute(server, {{z, z2}})));
        }
        case pi::PKind::Repl:
            return pi::repl(p->act, push_server(p->body, z, server));
        case pi::PKind::Choice: {
            std::vector<pi::Branch> bs;
            for (auto& b : p->branches) bs.push_back({b.act, push_server(b.body, z, server)});
            return pi::choice(std::move(bs));
        }
    }
    return p;
}

}  // namespace detail

inline pi::PP binding_canonicalize(pi::PP p, int budget = 200) {
    p = admin_normalize(p);
    bool moved = true;
    while (moved && budget > 0) {
        moved = false;
        NameVec binders;
        std::vector<pi::PP> items;
        split_scope(p, binders, items);
        NameSet bound(binders.begin(), binders.end());

        for (size_t i = 0; i < items.size() && !moved; ++i) {
            const pi::PP& srv = items[i];
            bool replicated = srv->kind == pi::PKind::Repl;
            if (!replicated && srv->kind != pi::PKind::Act) continue;
            if (!srv->act.input) continue;
            Name z = srv->act.subj;
            if (!bound.count(z)) continue;
            if (pi::free_names(srv->body).count(z)) continue;  // self-serving
            bool shadow = false;
            for (auto& b : srv->act.binders)
                if (b == z) shadow = true;
            if (shadow) continue;

            int clients = 0;
            bool ok = true;
            for (size_t j = 0; j < items.size() && ok; ++j)
                if (j != i) ok = detail::only_output_subject(items[j], z, clients);
            if (!ok || clients == 0) continue;
            if (!replicated && clients != 1) continue;

            std::vector<pi::PP> rest;
            for (size_t j = 0; j < items.size(); ++j)
                if (j != i) rest.push_back(detail::push_server(items[j], z, srv));
            pi::PP cand = admin_normalize(pi::nu_all(binders, pi::par(std::move(rest))));
            // joining a prefix pair whose client is itself a top level item
            // floats straight back out, so treat an invisible rewrite as a miss
            if (pi::normal_key(cand) == pi::normal_key(p)) continue;
            p = std::move(cand);
            moved = true;
            --budget;
        }
    }
    return p;
}

// The key two processes are compared under in the lockstep harness.
inline std::string comparator_key(const pi::PP& p) {
    return pi::normal_key(binding_canonicalize(p));
}

}  // namespace fuspi::verify
