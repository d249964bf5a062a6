#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fuspi/lam/ast.hpp"

// Loader for the .lmu corpus files. A file is a term with optional directive
// comments:
//
//   # context: x : X, f : X -> X
//   # mucontext: b : Y
//   # strategies: cbn-classical cbn-int
//   (\g:X -> X. g x) f
//
// Plain comment lines (no recognized directive) are ignored. The strategies
// line records which translations the term is meant to exercise.

namespace fuspi::verify {

struct CorpusEntry {
    std::string name;  // file stem
    lam::MP term;
    lam::TypeCtx ctx;
    lam::TypeCtx muctx;
    std::vector<std::string> strategies;
    std::string source;  // term text as written
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline lam::TypeCtx parse_ctx_directive(const std::string& body, const std::string& file) {
    lam::TypeCtx out;
    std::string text = trim(body);
    if (text.empty()) return out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string item = trim(comma == std::string::npos ? text.substr(pos)
                                                           : text.substr(pos, comma - pos));
        size_t colon = item.find(':');
        if (colon == std::string::npos)
            fail("bad context entry '", item, "' in ", file);
        Name x = mkname(trim(item.substr(0, colon)));
        out.emplace_back(x, lam::parse_type(trim(item.substr(colon + 1))));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace detail

inline CorpusEntry load_corpus_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open ", path.string());
    CorpusEntry e;
    e.name = path.stem().string();
    std::string line, body;
    while (std::getline(in, line)) {
        std::string s = detail::trim(line);
        if (!s.empty() && s[0] == '#') {
            std::string d = detail::trim(s.substr(1));
            if (d.rfind("context:", 0) == 0) {
                e.ctx = detail::parse_ctx_directive(d.substr(8), e.name);
            } else if (d.rfind("mucontext:", 0) == 0) {
                e.muctx = detail::parse_ctx_directive(d.substr(10), e.name);
            } else if (d.rfind("strategies:", 0) == 0) {
                std::istringstream ss(d.substr(11));
                std::string w;
                while (ss >> w) e.strategies.push_back(w);
            }
            continue;
        }
        if (!body.empty()) body += "\n";
        body += line;
    }
    e.source = detail::trim(body);
    if (e.source.empty()) fail("no term in ", path.string());
    e.term = lam::parse_term(e.source);
    return e;
}

inline std::vector<CorpusEntry> load_corpus(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& ent : std::filesystem::directory_iterator(dir))
        if (ent.path().extension() == ".lmu") files.push_back(ent.path());
    std::sort(files.begin(), files.end());
    std::vector<CorpusEntry> out;
    for (const auto& f : files) out.push_back(load_corpus_file(f));
    if (out.empty()) fail("no .lmu files under ", dir);
    return out;
}

inline std::string default_corpus_dir() {
#ifdef FUSPI_SOURCE_DIR
    return std::string(FUSPI_SOURCE_DIR) + "/corpus";
#else
    return "corpus";
#endif
}

}  // namespace fuspi::verify
