#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace fuspi {

// Library-level failure (parse errors, type errors, rule violations).
// The CLI maps these to exit code 1; usage problems exit 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

template <class... Ts>
[[noreturn]] void fail(const Ts&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    throw Error(os.str());
}

// Names are an interned base spelling plus a uid. uid 0 means the name was
// written in some source text; uid > 0 means it was generated while rewriting
// (freshening keeps the base so printers can pick readable spellings).
class NameTable {
public:
    static NameTable& instance() {
        static NameTable t;
        return t;
    }
    uint32_t intern(const std::string& s) {
        auto it = index_.find(s);
        if (it != index_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(spellings_.size());
        spellings_.push_back(s);
        index_.emplace(s, id);
        return id;
    }
    const std::string& spelling(uint32_t id) const { return spellings_.at(id); }

private:
    std::vector<std::string> spellings_;
    std::unordered_map<std::string, uint32_t> index_;
};

struct Name {
    uint32_t base = 0;
    uint64_t uid = 0;

    friend bool operator==(const Name& a, const Name& b) {
        return a.base == b.base && a.uid == b.uid;
    }
    friend bool operator!=(const Name& a, const Name& b) { return !(a == b); }
    friend bool operator<(const Name& a, const Name& b) {
        if (a.base != b.base) return a.base < b.base;
        return a.uid < b.uid;
    }
};

inline Name mkname(const std::string& s) {
    return Name{NameTable::instance().intern(s), 0};
}

inline const std::string& base_spelling(const Name& n) {
    return NameTable::instance().spelling(n.base);
}

inline uint64_t next_uid() {
    static std::atomic<uint64_t> counter{0};
    return ++counter;
}

// Fresh name with the same base spelling; never equal to any existing name.
inline Name freshen(const Name& n) { return Name{n.base, next_uid()}; }
inline Name fresh(const std::string& base) { return Name{NameTable::instance().intern(base), next_uid()}; }

// Debug spelling (uid-qualified); user-facing printers choose prettier ones.
inline std::string debug_str(const Name& n) {
    if (n.uid == 0) return base_spelling(n);
    return base_spelling(n) + "#" + std::to_string(n.uid);
}

struct NameHash {
    size_t operator()(const Name& n) const {
        return std::hash<uint64_t>()((static_cast<uint64_t>(n.base) << 32) ^ (n.uid * 0x9e3779b97f4a7c15ull));
    }
};

using NameSet = std::set<Name>;
using NameVec = std::vector<Name>;

inline bool contains(const NameSet& s, const Name& n) { return s.count(n) != 0; }
inline bool contains(const NameVec& v, const Name& n) {
    for (const auto& x : v)
        if (x == n) return true;
    return false;
}

// Exploration budgets shared by the semantic tools. Zero never means
// "unlimited"; callers that want more room pass bigger numbers.
struct Budget {
    int bisim_depth = 12;
    int replication_unfold = 32;
    long max_steps = 10000;
};

enum class Verdict { Yes, No, Unknown };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        default: return "unknown";
    }
}

}  // namespace fuspi
