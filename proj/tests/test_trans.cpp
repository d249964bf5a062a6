#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "fuspi/pi/normalize.hpp"
#include "fuspi/pi/parse.hpp"
#include "fuspi/pi/print.hpp"
#include "fuspi/trans/emit.hpp"

using namespace fuspi;

static std::string slurp(const std::string& rel) {
    std::ifstream in(std::string(FUSPI_SOURCE_DIR) + "/" + rel);
    REQUIRE(in.good());
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

static std::string key(const pi::PP& p) { return pi::normal_key(p); }
static std::string key(const std::string& text) { return pi::normal_key(pi::parse(text)); }

TEST_CASE("strategy words and their complements") {
    using namespace trans;
    auto& cn = strategy_named("cbn-classical");
    CHECK(cn.gamma == "!?");
    CHECK(cn.delta == "?");
    CHECK(cn.delta_c == "!");
    CHECK(cn.gamma_c.empty());
    CHECK(cn.classical);
    CHECK(call_by_name(cn));
    CHECK(inline_application(cn));

    auto& ci = strategy_named("cbn-int");
    CHECK(ci.delta_c == "!");
    CHECK(ci.gamma_c.empty());
    CHECK_FALSE(ci.classical);
    CHECK(call_by_name(ci));
    CHECK_FALSE(inline_application(ci));

    auto& vn = strategy_named("cbv-classical");
    CHECK(vn.gamma_c == "?");
    CHECK(vn.delta_c.empty());
    CHECK(vn.classical);
    CHECK_FALSE(call_by_name(vn));
    CHECK_FALSE(inline_application(vn));

    auto& vi = strategy_named("cbv-int");
    CHECK(vi.gamma_c.empty());
    CHECK(vi.delta_c.empty());
    CHECK_FALSE(vi.classical);
    CHECK_FALSE(call_by_name(vi));
    CHECK_FALSE(inline_application(vi));

    CHECK(dual_word("!v") == "?^");
    CHECK_THROWS(make_strategy("bad", "?!", "?"));   // value word must start with !
    CHECK_THROWS(make_strategy("bad", "!?", "!v"));  // no overlap
    CHECK_THROWS(make_strategy("bad", "", "!"));
}

TEST_CASE("protocol builders") {
    using namespace trans;
    Name u = mkname("u"), x = mkname("x"), v = mkname("v");
    CHECK(pi::to_string(proto("?", u, {x, v}, pi::fuse(x, v))) == "'u(x,v).x ~ v");
    CHECK(pi::to_string(proto("!", u, {x}, pi::nil())) == "!u(x).1");
    // empty word aliases the payload name
    CHECK(pi::to_string(proto("", u, {x}, pi::fuse(x, v))) == "u ~ v");
    // a two letter word relays through a fresh channel
    pi::PP two = proto("?!", u, {x, v}, pi::nil());
    CHECK(key(two) == key("'u(r).!r(x,v).1"));
    // co emits the output macro when every slot is a plain name
    CHECK(pi::to_string(co("?", u, {Slot{x}, Slot{v}})) == "'u<x,v>");
    // and fuses received names otherwise
    pi::PP c = co("!", u, {Slot{x}, Slot{v}});
    CHECK(key(c) == key("!u(a,b).(x ~ a | v ~ b)"));
}

static void check_golden(const std::string& strat, const std::string& term,
                         const std::string& file) {
    auto& st = trans::strategy_named(strat);
    pi::PP got = trans::translate(lam::parse_term(term), st, mkname("u"));
    INFO(strat << " | " << term << " => " << pi::to_string(got));
    CHECK(key(got) == key(pi::parse(slurp("golden/table/" + file))));
}

TEST_CASE("core translations match the recorded table") {
    for (auto& [strat, mid] : std::vector<std::pair<std::string, std::string>>{
             {"cbn-classical", "cbn-classical"},
             {"cbn-int", "cbn-int"},
             {"cbv-classical", "cbv-classical"},
             {"cbv-int", "cbv-int"}}) {
        check_golden(strat, "m", mid + "-var.pi");
        check_golden(strat, "\\x:X. m", mid + "-abs.pi");
        check_golden(strat, "(m) n", mid + "-app.pi");
    }
}

TEST_CASE("type translation by strategy") {
    using namespace trans;
    auto& cn = strategy_named("cbn-classical");
    CHECK(lla::to_string(tr_type(lam::parse_type("X -> Y"), cn)) ==
          lla::to_string(lla::parse_formula("?!(~X) $ ?Y")));
    auto& vi = strategy_named("cbv-int");
    CHECK(lla::to_string(tr_type(lam::parse_type("X -> Y"), vi)) ==
          lla::to_string(lla::parse_formula("?(~X) $ !Y")));
    CHECK(lla::to_string(tr_type(lam::parse_type("X * Y"), vi)) ==
          lla::to_string(lla::parse_formula("!X * !Y")));
    CHECK(lla::to_string(tr_type(lam::parse_type("X + Y"), vi)) ==
          lla::to_string(lla::parse_formula("up !X (+) up !Y")));
    CHECK(lla::to_string(tr_type(lam::parse_type("forall X. X -> X"), vi)) ==
          lla::to_string(lla::parse_formula("forall X. ?(~X) $ !X")));
    auto& simply = strategy_named("simply");
    CHECK(lla::to_string(tr_type(lam::parse_type("X -> Y"), simply)) ==
          lla::to_string(lla::parse_formula("?(~X) $ Y")));
    // dual commutes with the translation
    lla::FP t = tr_type(lam::parse_type("(X -> Y) -> X"), cn);
    CHECK(lla::alpha_equal(lla::dual(lla::dual(t)), t));
}

TEST_CASE("theorem sequents list context, output, continuations") {
    using namespace trans;
    auto& cn = strategy_named("cbn-classical");
    lam::TypeCtx ctx{{mkname("x"), lam::parse_type("X")}};
    lam::TypeCtx muctx{{mkname("b"), lam::parse_type("Y")}};
    lla::Sequent s =
        build_theorem_sequent(ctx, lam::parse_type("Y"), muctx, cn, mkname("u"));
    REQUIRE(s.entries.size() == 3);
    CHECK(lla::to_string(s.entries[0].formula) == lla::to_string(lla::parse_formula("?!(~X)")));
    CHECK(lla::to_string(s.entries[1].formula) == lla::to_string(lla::parse_formula("?Y")));
    CHECK(lla::to_string(s.entries[2].formula) == lla::to_string(lla::parse_formula("?Y")));
    lla::validate(s, type_arities(cn), "theorem");
}

TEST_CASE("arity translation sends terms to multi-name processes") {
    using namespace trans;
    Name y = mkname("y");
    // identity at X: one output name, a plain forward
    pi::PP id = translate_simple(lam::parse_term("\\x:X. x"), {}, {mkname("x0"), y});
    CHECK(key(id) == key("'x0<y>"));
    // an application creates one private server per argument
    lam::TypeCtx ctx{{mkname("f"), lam::parse_type("X -> X")}, {mkname("m"), lam::parse_type("X")}};
    pi::PP app = translate_simple(lam::parse_term("f m"), ctx, {y});
    CHECK(key(app) == key("nu x.('f<x,y> | !x(z).'m<z>)"));
}

static lam::TypeCtx tyctx(std::initializer_list<std::pair<const char*, const char*>> xs) {
    lam::TypeCtx out;
    for (auto& [n, ty] : xs) out.push_back({mkname(n), lam::parse_type(ty)});
    return out;
}

static void check_emit(const trans::Strategy& st, const lam::TypeCtx& ctx,
                       const lam::TypeCtx& muctx, const std::string& src) {
    CAPTURE(st.name, src);
    auto t = lam::parse_term(src);
    Name u = mkname("u");
    auto d = trans::emit_derivation(t, ctx, muctx, st, u);
    auto chk = lla::check_derivation(d, trans::type_arities(st));
    auto want = trans::build_theorem_sequent(ctx, lam::typecheck(t, ctx, muctx), muctx, st, u);
    INFO("checked: " << lla::to_string(chk.seq));
    INFO("theorem: " << lla::to_string(want));
    CHECK(lla::alpha_equal(chk.seq, want));
    CHECK(key(chk.proc) == key(trans::translate(t, st, u)));
}

TEST_CASE("emitted derivations check against the theorem sequent") {
    using namespace trans;
    auto core = [&](const Strategy& st) {
        check_emit(st, tyctx({{"m", "X"}}), {}, "m");
        check_emit(st, {}, {}, "\\x:X. x");
        check_emit(st, {}, {}, "\\x:X. \\y:Y. x");
        check_emit(st, tyctx({{"m", "X -> Y"}, {"n", "X"}}), {}, "m n");
        check_emit(st, tyctx({{"f", "X -> X"}}), {}, "(\\g:X -> X. \\y:X. g (g y)) f");
    };
    core(strategy_named("cbn-classical"));
    core(strategy_named("cbn-int"));
    core(strategy_named("cbv-classical"));
    core(strategy_named("cbv-int"));
}

TEST_CASE("emitted derivations cover jumps and continuations") {
    using namespace trans;
    for (const char* name : {"cbn-classical", "cbv-classical"}) {
        auto& st = strategy_named(name);
        check_emit(st, tyctx({{"m", "X"}}), {}, "mu a.[a] m");
        check_emit(st, tyctx({{"m", "Y"}}), tyctx({{"b", "Y"}}), "mu a:X.[b] m");
        check_emit(st, tyctx({{"m", "X"}}), tyctx({{"b", "Y"}}), "mu a.[b] mu c:Y.[a] m");
        check_emit(st, {}, {}, "\\f:(X -> Y) -> X. mu a.[a] f (\\x:X. mu d:Y.[a] x)");
    }
    // single straight jump stays within the intuitionistic fragments
    check_emit(strategy_named("cbn-int"), tyctx({{"m", "X"}}), {}, "mu a.[a] m");
    check_emit(strategy_named("cbv-int"), tyctx({{"m", "X"}}), {}, "mu a.[a] m");
}

TEST_CASE("emitted derivations cover pairs and sums") {
    using namespace trans;
    for (const char* name : {"cbn-classical", "cbn-int", "cbv-int"}) {
        auto& st = strategy_named(name);
        check_emit(st, tyctx({{"m", "X"}, {"n", "Y"}}), {}, "(m, n)");
        check_emit(st, tyctx({{"m", "X"}}), {}, "(m, m)");
        check_emit(st, tyctx({{"p", "X * Y"}}), {}, "let (x,y) = p in x");
        check_emit(st, tyctx({{"m", "X"}}), {}, "inl[Y] m");
        check_emit(st, tyctx({{"m", "X"}}), {}, "inr[Y] m");
        check_emit(st, tyctx({{"s", "X + Z"}, {"m", "Z"}}), {},
                   "case s of inl x. m | inr y. y");
    }
}

TEST_CASE("emitted derivations cover quantifiers") {
    using namespace trans;
    for (const char* name : {"cbn-classical", "cbn-int", "cbv-classical", "cbv-int"}) {
        auto& st = strategy_named(name);
        check_emit(st, {}, {}, "/\\X. \\x:X. x");
        check_emit(st, tyctx({{"m", "Y"}}), {}, "((/\\X. \\x:X. x) [Y]) m");
    }
}

TEST_CASE("emitted derivations survive a serialization round trip") {
    using namespace trans;
    auto& st = strategy_named("cbn-classical");
    auto t = lam::parse_term("\\f:(X -> Y) -> X. mu a.[a] f (\\x:X. mu d:Y.[a] x)");
    Name u = mkname("u");
    auto d = emit_derivation(t, {}, {}, st, u);
    std::string text = lla::serialize(d);
    auto d2 = lla::parse_derivation(text);
    auto c1 = lla::check_derivation(d, type_arities(st));
    auto c2 = lla::check_derivation(d2, type_arities(st));
    CHECK(lla::alpha_equal(c1.seq, c2.seq));
    CHECK(key(c1.proc) == key(c2.proc));
}

static void check_emit_simple(const lam::TypeCtx& ctx, const std::string& src) {
    CAPTURE(src);
    auto st = trans::strategy_named("simply");
    auto t = lam::parse_term(src);
    lam::TP ty = lam::typecheck(t, ctx, {});
    int ar = lla::arity(trans::tr_type(ty, st), trans::type_arities(st));
    NameVec ys;
    for (int i = 0; i < ar; ++i) ys.push_back(fresh("y"));
    auto d = trans::emit_derivation_simple(t, ctx, ys);
    auto chk = lla::check_derivation(d, trans::type_arities(st));
    auto want = trans::build_theorem_sequent_simple(ctx, ty, st, ys);
    INFO("checked: " << lla::to_string(chk.seq));
    INFO("theorem: " << lla::to_string(want));
    CHECK(lla::alpha_equal(chk.seq, want));
    CHECK(key(chk.proc) == key(trans::translate_simple(t, ctx, ys)));
}

TEST_CASE("arity translation derivations check") {
    check_emit_simple(tyctx({{"m", "X"}}), "m");
    check_emit_simple(tyctx({{"f", "X -> X"}}), "f");
    check_emit_simple({}, "\\x:X. x");
    check_emit_simple({}, "\\x:X -> X. x");
    check_emit_simple(tyctx({{"f", "X -> X"}, {"m", "X"}}), "f m");
    check_emit_simple({}, "(\\x:X -> X. x) (\\y:X. y)");
    check_emit_simple({}, "\\x:X -> X. \\w:X. x (x w)");
    check_emit_simple(tyctx({{"f", "(X -> X) -> X -> X"}}), "\\w:X. f (\\y:X. y) w");
}
