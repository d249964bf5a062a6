#include <catch2/catch_amalgamated.hpp>

#include "fuspi/pi/parse.hpp"
#include "fuspi/pi/print.hpp"
#include "fuspi/verify/applicable.hpp"
#include "fuspi/verify/corpus.hpp"
#include "fuspi/verify/lockstep.hpp"
#include "fuspi/verify/normal.hpp"
#include "fuspi/verify/probe.hpp"
#include "fuspi/verify/sigma_gen.hpp"
#include "fuspi/verify/typing.hpp"

using namespace fuspi;
using trans::strategy_named;

namespace {

pi::PP P(const std::string& s) { return pi::parse(s); }
std::string nk(const pi::PP& p) { return pi::normal_key(p); }

lam::TypeCtx ctx_of(const std::string& spec) {
    if (spec.empty()) return {};
    return verify::detail::parse_ctx_directive(spec, "<test>");
}

}  // namespace

TEST_CASE("unmatchable prefixes collect away") {
    CHECK(nk(verify::admin_normalize(P("nu c. (c(x).'k<x>)"))) == nk(P("1")));
    CHECK(nk(verify::admin_normalize(P("nu c. nu b. (c(x).1 + b(y).1)"))) == nk(P("1")));
    // dropping one dead item exposes the next
    CHECK(nk(verify::admin_normalize(P("nu c. nu d. (c(x).'d<x> | d(y).1)"))) == nk(P("1")));
}

TEST_CASE("prefixes with a peer or a free subject survive collection") {
    for (const char* src : {
             "c(x).'k<x>",                     // free subject
             "nu c. (c(x).'m<x> | 'c<k>)",     // bound but called
             "nu c. (c(x).1 + b(y).1)",        // one branch reaches a free name
             "nu z. (!z(w).'m<w> | 'k<z>)",    // subject escapes as a payload
         }) {
        INFO(src);
        CHECK(nk(verify::admin_normalize(P(src))) == nk(P(src)));
    }
}

TEST_CASE("shared servers distribute to their call sites") {
    std::string shared = verify::comparator_key(P("nu z. (!z(w).'m<w> | 'z<a> | 'z<b>)"));
    std::string split =
        verify::comparator_key(P("nu z. (!z(w).'m<w> | 'z<a>) | nu z. (!z(w).'m<w> | 'z<b>)"));
    CHECK(shared == split);

    // a client under a prefix gets its private copy in place
    std::string nested = verify::comparator_key(P("nu z. (!z(w).'m<w> | k(v).'z<v>)"));
    std::string inlined = verify::comparator_key(P("k(v). nu z. ('z<v> | !z(w).'m<w>)"));
    CHECK(nested == inlined);
}

TEST_CASE("servers that are read or escape stay shared") {
    for (const char* src : {
             "nu z. (!z(w).'m<w> | 'k<z>)",  // payload occurrence
             "nu z. (!z(w).'m<w> | z(v).1)", // someone else inputs at z
             "nu z. (z(w).'m<w> | 'z<a> | 'z<b>)",  // two clients of a linear server
         }) {
        INFO(src);
        CHECK(verify::comparator_key(P(src)) == nk(verify::admin_normalize(P(src))));
    }
}

TEST_CASE("the identity beta stays in lockstep under every strategy") {
    lam::MP t = lam::parse_term("(\\x:X. x) m");
    for (const char* stname : {"cbn-classical", "cbn-int", "cbv-classical", "cbv-int"}) {
        auto& st = strategy_named(stname);
        auto rep = verify::check_step_correspondence(t, st);
        INFO(stname << ": " << rep.failure);
        CHECK(rep.ok);
        CHECK(rep.bisim_fallbacks == 0);
        CHECK(rep.deterministic);
        CHECK(rep.steps == (trans::call_by_name(st) ? 2 : 3));
        CHECK(rep.terminal_machine == (trans::call_by_name(st) ? "head-variable" : "value"));
    }
}

TEST_CASE("pairs and sums stay in lockstep") {
    for (const char* src : {"let (x,y) = (m,n) in x",
                            "case inl[Y] m of inl x. x | inr y. y"}) {
        lam::MP t = lam::parse_term(src);
        for (const char* stname : {"cbn-classical", "cbn-int", "cbv-int"}) {
            auto rep = verify::check_step_correspondence(t, strategy_named(stname));
            INFO(stname << " on " << src << ": " << rep.failure);
            CHECK(rep.ok);
            CHECK(rep.bisim_fallbacks == 0);
        }
    }
}

TEST_CASE("jumps stay in lockstep") {
    for (const char* src : {"mu b.[b] m",
                            "mu b.[b] ((\\x:X. x) m)",
                            "(mu b.[b] (\\x:X. x)) m"}) {
        lam::MP t = lam::parse_term(src);
        for (const char* stname : {"cbn-classical", "cbn-int", "cbv-classical", "cbv-int"}) {
            auto rep = verify::check_step_correspondence(t, strategy_named(stname));
            INFO(stname << " on " << src << ": " << rep.failure);
            CHECK(rep.ok);
        }
    }
}

TEST_CASE("a twice-used continuation still corresponds") {
    // The inner jump reuses b, so the parked stack is fetched while another
    // reference to it is still waiting inside the argument server.
    lam::MP t = lam::parse_term("(mu b.[b] (\\x:X. mu c:X.[b] (\\y:X. y))) m");
    auto rep = verify::check_step_correspondence(t, strategy_named("cbn-classical"));
    INFO(rep.failure);
    CHECK(rep.ok);
    CHECK(rep.terminal_machine == "head-variable");
}

TEST_CASE("typing is preserved along every translation") {
    struct Row {
        const char* term;
        const char* ctx;
        std::vector<const char*> strategies;
    };
    std::vector<Row> rows = {
        {"m", "m : X", {"cbn-classical", "cbn-int", "cbv-classical", "cbv-int", "simply"}},
        {"(\\x:X. x) m", "m : X", {"cbn-classical", "cbn-int", "cbv-classical", "cbv-int", "simply"}},
        {"let (x,y) = p in x", "p : X * Y", {"cbn-classical", "cbn-int", "cbv-int"}},
        {"case inl[Y] m of inl x. x | inr y. k", "m : X, k : X",
         {"cbn-classical", "cbn-int", "cbv-int"}},
        {"mu b.[b] m", "m : X", {"cbn-classical", "cbn-int", "cbv-classical", "cbv-int"}},
    };
    for (auto& row : rows) {
        lam::MP t = lam::parse_term(row.term);
        for (auto* stname : row.strategies) {
            auto rep = verify::check_typing_preservation(t, ctx_of(row.ctx), {},
                                                         strategy_named(stname));
            INFO(stname << " on " << row.term << ": " << rep.failure);
            CHECK(rep.ok);
        }
    }
}

TEST_CASE("head linear reduction mirrors the arity translation") {
    auto rep = verify::check_hlr_correspondence(lam::parse_term("(\\x:X. x) m"),
                                                ctx_of("m : X"));
    INFO(rep.failure);
    CHECK(rep.ok);
    CHECK(rep.steps == 1);

    rep = verify::check_hlr_correspondence(
        lam::parse_term("((\\f:X -> X. \\x:X. f (f x)) (\\y:X. y)) m"), ctx_of("m : X"));
    INFO(rep.failure);
    CHECK(rep.ok);
    CHECK(rep.steps >= 5);
}

TEST_CASE("argument shuffles preserve the arity translation exactly") {
    auto pairs = verify::sigma_pairs(2026, 12);
    REQUIRE(pairs.size() == 12);
    for (size_t i = 0; i < pairs.size(); ++i) {
        INFO("pair " << i << ": " << lam::to_string(pairs[i].a) << "  vs  "
                     << lam::to_string(pairs[i].b));
        CHECK(lam::sigma_equivalent(pairs[i].a, pairs[i].b));
        lam::TP ty = lam::typecheck(pairs[i].a, verify::sigma_globals());
        auto& st = strategy_named("simply");
        int width = lla::arity(trans::tr_type(ty, st), trans::type_arities(st));
        NameVec ys;
        for (int j = 0; j < width; ++j) ys.push_back(mkname("r" + std::to_string(j + 1)));
        CHECK(nk(trans::translate_simple(pairs[i].a, verify::sigma_globals(), ys)) ==
              nk(trans::translate_simple(pairs[i].b, verify::sigma_globals(), ys)));
    }
}

TEST_CASE("translated terms pass the liveness probe") {
    struct Row {
        const char* term;
        const char* ctx;
        const char* strategy;
    };
    for (auto& row : std::vector<Row>{
             {"m", "m : X", "cbn-classical"},
             {"(\\x:X. x) m", "m : X", "cbn-int"},
             {"(\\x:X. x) m", "m : X", "cbv-int"},
             {"mu b.[b] m", "m : X", "cbv-classical"},
         }) {
        auto rep = verify::deadlock_probe(lam::parse_term(row.term), ctx_of(row.ctx), {},
                                          strategy_named(row.strategy));
        INFO(row.strategy << " on " << row.term << ": " << rep.failure);
        CHECK(rep.ok);
        CHECK(rep.states > 0);
    }
}

TEST_CASE("dead processes fail the liveness probe") {
    CHECK(verify::run_probe(P("'omega<>")).ok);
    CHECK(verify::run_probe(P("nu c. ('c<> | c().'omega<>)")).ok);

    auto starved = verify::run_probe(P("nu c. (c(x).'omega<x>)"));
    CHECK_FALSE(starved.ok);
    CHECK(starved.failure == "a reachable state cannot raise the flag");

    auto cycle = verify::run_probe(P("nu c. nu d. (c(x).'d<x> | d(y).'omega<y>)"));
    CHECK_FALSE(cycle.ok);
    CHECK(cycle.failure == "a reachable state cannot raise the flag");
}

TEST_CASE("strategy applicability follows the structural rules") {
    struct Row {
        const char* term;
        lam::TypeCtx muctx;
        std::vector<const char*> expect;
    };
    Name c = mkname("c");
    lam::TP X = lam::parse_type("X");
    std::vector<Row> rows = {
        {"m", {}, {"cbn-classical", "cbn-int", "cbv-classical", "cbv-int", "simply"}},
        {"(\\x:X. x) m", {}, {"cbn-classical", "cbn-int", "cbv-classical", "cbv-int", "simply"}},
        {"$m", {}, {"cbn-classical", "cbn-int"}},
        {"let (x,y) = p in x", {}, {"cbn-classical", "cbn-int", "cbv-int"}},
        {"mu b.[b] m", {}, {"cbn-classical", "cbn-int", "cbv-classical", "cbv-int"}},
        {"mu b:X.[c] m", {{c, X}}, {"cbn-classical", "cbv-classical"}},
        {"((\\f:X -> X. f) g) ((\\y:X. y) m)", {}, {"cbn-classical", "cbn-int", "cbv-classical", "simply"}},
        {"((\\x:X. x) m, n)", {}, {"cbn-classical", "cbn-int"}},
    };
    for (auto& row : rows) {
        lam::MP t = lam::parse_term(row.term);
        for (const auto& st : trans::strategies()) {
            bool want = false;
            for (auto* e : row.expect)
                if (st.name == e) want = true;
            std::string why;
            bool got = verify::strategy_applicable(t, row.muctx, st, &why);
            INFO(st.name << " on " << row.term << ": " << why);
            CHECK(got == want);
        }
    }
}

TEST_CASE("corpus files parse and declare applicable strategies") {
    auto entries = verify::load_corpus(verify::default_corpus_dir());
    REQUIRE(entries.size() >= 20);
    NameSet seen;
    for (auto& e : entries) {
        INFO(e.name);
        REQUIRE_FALSE(e.strategies.empty());
        // the declared list must match the predicate exactly
        for (const auto& st : trans::strategies()) {
            bool declared = false;
            for (auto& s : e.strategies)
                if (s == st.name) declared = true;
            std::string why;
            bool applicable = verify::strategy_applicable(e.term, e.muctx, st, &why);
            INFO(st.name << (declared ? " declared" : " not declared") << ": " << why);
            CHECK(declared == applicable);
        }
        // every entry typechecks in its declared contexts
        CHECK(lam::typecheck(e.term, e.ctx, e.muctx) != nullptr);
    }
}
