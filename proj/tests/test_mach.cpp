#include <catch2/catch_amalgamated.hpp>

#include "fuspi/lam/ast.hpp"
#include "fuspi/mach/machine.hpp"
#include "fuspi/pi/normalize.hpp"
#include "fuspi/pi/print.hpp"

using namespace fuspi;
using trans::strategy_named;

namespace {

mach::Machine load(const std::string& src, const std::string& stname, const std::string& tail) {
    return mach::Machine::load(lam::parse_term(src), strategy_named(stname), mkname(tail));
}

// Runs the machine to a terminal configuration, returning the step
// descriptions and the total communication budget.
struct RunLog {
    std::vector<std::string> steps;
    std::vector<int> taus;
    std::string terminal;
};

RunLog run(mach::Machine m, int cap = 200) {
    RunLog log;
    while ((int)log.steps.size() < cap) {
        auto info = m.step();
        if (!info) break;
        log.steps.push_back(info->desc);
        log.taus.push_back(info->taus);
    }
    log.terminal = m.terminal_kind();
    return log;
}

std::string pkey(const pi::PP& p) { return pi::normal_key(p); }

}  // namespace

TEST_CASE("call-by-name machine runs a beta redex") {
    auto m = load("(\\x:X. x) m", "cbn-classical", "a");
    REQUIRE(m.by_name);
    REQUIRE(m.n.k.fs.size() == 1);
    CHECK(m.n.k.fs.front().kind == mach::CbnFrame::Arg);
    CHECK(m.n.focus->kind == lam::MKind::Lam);

    auto log = run(m);
    REQUIRE(log.steps.size() == 2);
    CHECK(log.steps[0] == "apply function");
    CHECK(log.steps[1] == "force suspended argument");
    CHECK(log.taus == std::vector<int>{1, 1});
    CHECK(log.terminal == "head-variable");
}

TEST_CASE("call-by-name machine splits pairs and selects branches") {
    auto log = run(load("let (x,y) = (m,n) in x", "cbn-classical", "a"));
    REQUIRE(log.steps.size() == 2);
    CHECK(log.steps[0] == "split pair");
    CHECK(log.taus[0] == 1);
    CHECK(log.terminal == "head-variable");

    log = run(load("case inl[Y] m of inl x. x | inr y. y", "cbn-int", "a"));
    REQUIRE(log.steps.size() == 2);
    CHECK(log.steps[0] == "select branch");
    CHECK(log.taus == std::vector<int>{2, 1});
    CHECK(log.terminal == "head-variable");
}

TEST_CASE("call-by-name machine stops at values") {
    auto log = run(load("(\\g:X -> X. \\y:X. g (g y)) f", "cbn-classical", "a"));
    REQUIRE(log.steps.size() == 1);
    CHECK(log.steps[0] == "apply function");
    CHECK(log.terminal == "value");
}

TEST_CASE("call-by-value machine evaluates the argument first") {
    auto m = load("(\\x:X. x) m", "cbv-classical", "a");
    REQUIRE_FALSE(m.by_name);
    REQUIRE(m.v.k.fs.size() == 1);
    CHECK(m.v.k.fs.back().kind == mach::CbvFrame::Fun);
    CHECK(m.v.focus->kind == lam::MKind::Var);

    auto log = run(m);
    REQUIRE(log.steps.size() == 3);
    CHECK(log.steps[0] == "argument ready");
    CHECK(log.steps[1] == "function ready");
    CHECK(log.steps[2] == "apply function");
    CHECK(log.taus == std::vector<int>{1, 1, 1});
    CHECK(log.terminal == "value");
}

TEST_CASE("call-by-value machine budgets shrink without the access prefix") {
    auto log = run(load("(\\x:X. x) m", "cbv-int", "a"));
    REQUIRE(log.taus == std::vector<int>{0, 0, 1});
    CHECK(log.terminal == "value");
}

TEST_CASE("call-by-value machine stops at an unknown head") {
    auto log = run(load("(\\f:X -> X. f m) g", "cbv-int", "a"));
    REQUIRE(log.steps.size() == 5);
    CHECK(log.steps[2] == "apply function");
    CHECK(log.steps[4] == "function ready");
    CHECK(log.taus == std::vector<int>{0, 0, 1, 0, 0});
    CHECK(log.terminal == "head-variable");
}

TEST_CASE("call-by-value machine splits pairs directly") {
    auto log = run(load("let (x,y) = (m,n) in y", "cbv-classical", "a"));
    REQUIRE(log.steps.size() == 1);
    CHECK(log.steps[0] == "split pair");
    CHECK(log.taus[0] == 2);
    CHECK(log.terminal == "value");

    log = run(load("case inr[X] m of inl x. x | inr y. y", "cbv-int", "a"));
    REQUIRE(log.steps.size() == 1);
    CHECK(log.taus[0] == 2);
    CHECK(log.terminal == "value");
}

TEST_CASE("loading a term is invisible to the process view") {
    // Administrative moves must not change the translated process, so the
    // process of a loaded configuration equals the plain translation.
    std::vector<std::string> terms = {
        "m",
        "\\x:X. x",
        "(\\x:X. x) m",
        "(\\f:X -> X. f m) g",
        "let (x,y) = p in x",
        "case s of inl x. m | inr y. y",
        "(m, n)",
        "inl[Y] m",
        "$m",
        "(\\g:X -> X. \\y:X. g (g y)) f",
    };
    for (auto& stname : {"cbn-classical", "cbn-int", "cbv-classical", "cbv-int"}) {
        auto& st = strategy_named(stname);
        for (auto& src : terms) {
            if (src[0] == '$' && !call_by_name(st)) continue;  // suspensions are by-name
            INFO(stname << "  " << src);
            lam::MP t = lam::parse_term(src);
            Name a = mkname("a");
            auto m = mach::Machine::load(t, st, a);
            CHECK(pkey(m.process()) == pkey(trans::translate(t, st, a)));
        }
    }
}

TEST_CASE("jumps park and refetch continuations invisibly") {
    for (auto& stname : {"cbn-classical", "cbv-classical", "cbn-int", "cbv-int"}) {
        auto& st = strategy_named(stname);
        Name a = mkname("a");

        INFO(stname);
        // The jump target is the binder itself: the parked stack is refetched.
        lam::MP t1 = lam::parse_term("mu b.[b] m");
        auto m1 = mach::Machine::load(t1, st, a);
        CHECK(pkey(m1.process()) == pkey(trans::translate(t1, st, a)));

        // The jump goes elsewhere: the parked stack is dead and collects away.
        lam::MP t2 = lam::parse_term("mu b:X.[c] m");
        auto m2 = mach::Machine::load(t2, st, a);
        CHECK(pkey(m2.process()) == pkey(trans::translate(t2, st, a)));
    }
}

TEST_CASE("machine configurations print compactly") {
    auto m = load("(\\x:X. x) m", "cbn-classical", "a");
    CHECK(m.show() == "\\x:X. x || arg(m) . a");
    auto v = load("(\\x:X. x) m", "cbv-classical", "a");
    CHECK(v.show() == "a . fun(\\x:X. x) || m");
    v.step();
    v.step();
    CHECK(v.show() == "a || ((\\x:X. x) @ m)");
}
