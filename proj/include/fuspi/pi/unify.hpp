#pragma once

#include "fuspi/pi/normalize.hpp"

namespace fuspi::pi {

namespace detail {

// Unguarded fusions of p, i.e. those reachable through parallel composition
// and hiding only. Binders must already be unique (rename_apart).
inline void unguarded_fusions(const PP& p, UnionFind& uf) {
    switch (p->kind) {
        case PKind::Par:
            for (auto& c : p->children) unguarded_fusions(c, uf);
            return;
        case PKind::New:
            unguarded_fusions(p->body, uf);
            return;
        case PKind::Fuse:
            uf.unite(p->name_a, p->name_b);
            return;
        default:
            return;
    }
}

}  // namespace detail

// The entailed name equivalence: does p force u = v? Hidden names may appear
// as intermediate links; fusions under a prefix do not count.
inline bool unifies(const PP& p, const Name& u, const Name& v) {
    if (u == v) return true;
    detail::UnionFind uf;
    detail::unguarded_fusions(rename_apart(p), uf);
    return uf.find(u) == uf.find(v);
}

// Partition of the free names of p induced by its unguarded fusions;
// singleton classes are omitted. Hidden link names are dropped from classes.
inline std::vector<NameVec> fusion_classes_on_free(const PP& p) {
    PP q = rename_apart(p);
    NameSet fv = free_names(q);
    detail::UnionFind uf;
    detail::unguarded_fusions(q, uf);
    std::vector<NameVec> out;
    for (auto& [root, members] : uf.classes()) {
        NameVec visible;
        for (auto& m : members)
            if (fv.count(m)) visible.push_back(m);
        if (visible.size() >= 2) out.push_back(visible);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace fuspi::pi
