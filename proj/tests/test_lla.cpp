#include <catch2/catch_amalgamated.hpp>

#include "fuspi/lla/derivation.hpp"
#include "fuspi/pi/normalize.hpp"
#include "fuspi/pi/parse.hpp"
#include "fuspi/pi/print.hpp"

using namespace fuspi;
using namespace fuspi::lla;

static FP F(const std::string& s) { return parse_formula(s); }

TEST_CASE("formula parse/print round trip") {
    for (const char* s : {
             "X",
             "~X",
             "!X * ?Y",
             "dn X $ up Y",
             "forall X. !X $ ?~X",
             "X (+) Y",
             "(X (&) Y) * Z",
             "exists X. dn (X * X)",
             "?(~X $ Y)",
         }) {
        FP f = F(s);
        CAPTURE(s, to_string(f));
        REQUIRE(alpha_equal(F(to_string(f)), f));
    }
}

TEST_CASE("dual is a De Morgan involution") {
    for (const char* s : {"X", "!X * ?Y", "forall X. dn X $ up ~X", "X (+) up Y"}) {
        FP f = F(s);
        REQUIRE(alpha_equal(dual(dual(f)), f));
    }
    REQUIRE(alpha_equal(dual(F("!X * dn Y")), F("?~X $ up ~Y")));
    REQUIRE(alpha_equal(dual(F("up X (&) dn Y")), F("dn ~X (+) up ~Y")));
    REQUIRE(alpha_equal(dual(F("forall X. X")), F("exists X. ~X")));
}

TEST_CASE("arities: modalities reset to one, connectives add, quantifiers are transparent") {
    ArityCtx one;
    REQUIRE(arity(F("X"), one) == 1);
    REQUIRE(arity(F("X * Y"), one) == 2);
    REQUIRE(arity(F("!(X * Y)"), one) == 1);
    REQUIRE(arity(F("forall X. X * X * X"), one) == 3);
    REQUIRE(arity(F("X (+) Y"), one) == 2);
    ArityCtx two;
    two.fallback = 2;
    REQUIRE(arity(F("X"), two) == 2);
    REQUIRE(arity(F("?~X $ X"), two) == 3);
}

TEST_CASE("substitution hits variables and their negations, avoiding capture") {
    FP inst = subst(F("~X $ X"), mkname("X"), F("!Y"));
    REQUIRE(alpha_equal(inst, F("?~Y $ !Y")));
    FP cap = subst(F("forall X. Y * X"), mkname("Y"), F("X"));
    REQUIRE(alpha_equal(cap, F("forall Z. X * Z")));
}

static Checked check(const DP& d, int fallback = 1) {
    ArityCtx ctx;
    ctx.fallback = fallback;
    return check_derivation(d, ctx);
}

static DP parse_d(const std::string& s) { return parse_derivation(s); }

static Sequent seq_of(std::vector<std::pair<std::string, std::string>> entries) {
    Sequent s;
    for (auto& [ns, f] : entries) s.entries.push_back({detail::parse_names(ns), parse_formula(f)});
    return s;
}

TEST_CASE("axiom produces an equator bundle") {
    Checked c = check(parse_d("axiom X ; u ; v"));
    REQUIRE(alpha_equal(c.seq, seq_of({{"u", "~X"}, {"v", "X"}})));
    REQUIRE(pi::alpha_equal(c.proc, pi::parse("u ~ v")));
}

TEST_CASE("axiom at a composite formula bundles one equator per name") {
    Checked c = check(parse_d("axiom X * X ; u1,u2 ; v1,v2"));
    REQUIRE(pi::normal_key(c.proc) == pi::normal_key(pi::parse("u1 ~ v1 | u2 ~ v2")));
}

TEST_CASE("cut composes and hides, and equators then vanish") {
    Checked c = check(parse_d(
        "cut u ; X\n"
        "  axiom X ; u ; y\n"
        "  axiom X ; w ; u\n"));
    REQUIRE(alpha_equal(c.seq, seq_of({{"y", "X"}, {"w", "~X"}})));
    REQUIRE(pi::normal_key(c.proc) == pi::normal_key(pi::parse("w ~ y")));
}

TEST_CASE("par merges two adjacent entries") {
    Checked c = check(parse_d(
        "par 0\n"
        "  axiom X ; x ; y\n"));
    REQUIRE(alpha_equal(c.seq, seq_of({{"x,y", "~X $ X"}})));
}

TEST_CASE("actions wrap the last entry and prefix the process") {
    Checked c = check(parse_d(
        "down-action u\n"
        "  up-action v\n"
        "    exchange 0\n"
        "      whynot-action w\n"
        "        axiom X ; x ; y\n"));
    REQUIRE(alpha_equal(c.seq, seq_of({{"w", "?X"}, {"u", "dn up ~X"}})));
    REQUIRE(pi::alpha_equal(c.proc, pi::parse("u(v).'v(x).'w(y).(x ~ y)")));
}

TEST_CASE("down-action insists on an up- or ?-headed context") {
    REQUIRE_THROWS_WITH(check(parse_d(
                            "down-action w\n"
                            "  exchange 0\n"
                            "    axiom X ; u ; v\n")),
                        Catch::Matchers::ContainsSubstring("down-action"));
}

TEST_CASE("ofcourse-action insists on a fully ?-headed context") {
    std::string inner =
        "  exchange 0\n"
        "    up-action u\n"
        "      exchange 0\n"
        "        whynot-action q\n"
        "          axiom X ; x ; v\n";
    REQUIRE_NOTHROW(check(parse_d("down-action w\n" + inner)));
    REQUIRE_THROWS_WITH(check(parse_d("ofcourse-action w\n" + inner)),
                        Catch::Matchers::ContainsSubstring("ofcourse-action"));
}

TEST_CASE("replication rule produces a replicated input") {
    Checked c = check(parse_d(
        "ofcourse-action w\n"
        "  exchange 0\n"
        "    whynot-action u\n"
        "      axiom X ; x ; v\n"));
    REQUIRE(alpha_equal(c.seq, seq_of({{"u", "?X"}, {"w", "!~X"}})));
    REQUIRE(pi::alpha_equal(c.proc, pi::parse("!w(x).'u(v).(x ~ v)")));
}

TEST_CASE("contraction merges two ?-entries by renaming") {
    Checked c = check(parse_d(
        "contraction u v w\n"
        "  weakening v ; ?X\n"
        "    whynot-action u\n"
        "      axiom X ; x ; y\n"));
    REQUIRE(alpha_equal(c.seq, seq_of({{"x", "~X"}, {"w", "?X"}})));
    REQUIRE(pi::alpha_equal(c.proc, pi::parse("'w(y).(x ~ y)")));
}

TEST_CASE("name distinctness is enforced") {
    REQUIRE_THROWS_WITH(check(parse_d("axiom X ; u ; u")),
                        Catch::Matchers::ContainsSubstring("appears twice"));
}

TEST_CASE("forall checks freshness in the context") {
    REQUIRE_NOTHROW(check(parse_d(
        "forall X\n"
        "  axiom Y ; u ; v\n")));
    REQUIRE_THROWS_WITH(check(parse_d(
                            "forall X\n"
                            "  axiom X ; u ; v\n")),
                        Catch::Matchers::ContainsSubstring("occurs free"));
}

TEST_CASE("exists requires the witness arity to match the variable") {
    REQUIRE_NOTHROW(check(parse_d(
        "exists Y ; Y ; X\n"
        "  axiom X ; u ; v\n")));
    REQUIRE_THROWS_WITH(check(parse_d(
                            "exists Y ; Y ; X * X\n"
                            "  axiom X * X ; u1,u2 ; v1,v2\n")),
                        Catch::Matchers::ContainsSubstring("arity"));
}

TEST_CASE("quantifier rules can work under a modality prefix") {
    Checked c = check(parse_d(
        "forall Y ; ?\n"
        "  whynot-action u\n"
        "    axiom X ; x ; y\n"));
    REQUIRE(alpha_equal(c.seq, seq_of({{"x", "~X"}, {"u", "?(forall Y. X)"}})));
    Checked e = check(parse_d(
        "exists Y ; Y ; X ; ?\n"
        "  whynot-action u\n"
        "    axiom X ; x ; y\n"));
    REQUIRE(alpha_equal(e.seq, seq_of({{"x", "~X"}, {"u", "?(exists Y. Y)"}})));
}

TEST_CASE("plus rules widen an up-headed entry") {
    Checked c = check(parse_d(
        "plus-left b ; up Y\n"
        "  up-action a\n"
        "    axiom X ; x ; y\n"));
    REQUIRE(alpha_equal(c.seq, seq_of({{"x", "~X"}, {"a,b", "up X (+) up Y"}})));
    Checked r = check(parse_d(
        "plus-right b ; up Y\n"
        "  up-action a\n"
        "    axiom X ; x ; y\n"));
    REQUIRE(alpha_equal(r.seq, seq_of({{"x", "~X"}, {"b,a", "up Y (+) up X"}})));
}

TEST_CASE("with-choice types a guarded input choice") {
    Checked c = check(parse_d(
        "with-choice a b\n"
        "  axiom X ; x ; y\n"
        "  axiom X ; x ; y\n"));
    REQUIRE(alpha_equal(c.seq, seq_of({{"x", "~X"}, {"a,b", "dn X (&) dn X"}})));
    REQUIRE(pi::alpha_equal(c.proc, pi::parse("a(y).(x ~ y) + b(y).(x ~ y)")));
}

TEST_CASE("derivation serialization round trips") {
    DP d = parse_d(
        "cut u ; !~X\n"
        "  axiom !~X ; u ; z\n"
        "  ofcourse-action u\n"
        "    exchange 0\n"
        "      whynot-action w\n"
        "        axiom X ; x ; y\n");
    DP d2 = parse_derivation(serialize(d));
    Checked a = check(d), b = check(d2);
    REQUIRE(alpha_equal(a.seq, b.seq));
    REQUIRE(pi::alpha_equal(a.proc, b.proc));
}
