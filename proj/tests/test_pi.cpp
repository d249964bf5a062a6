#include <catch2/catch_amalgamated.hpp>

#include "fuspi/pi/bisim.hpp"
#include "fuspi/pi/parse.hpp"
#include "fuspi/pi/print.hpp"

using namespace fuspi;
using namespace fuspi::pi;

static PP P(const std::string& s) { return parse(s); }

TEST_CASE("process parse/print round trip") {
    for (const char* s : {
             "1",
             "x ~ y",
             "u(x,y).'x<y>",
             "'u(x).(x ~ y | v(z).1)",
             "nu x. (x ~ y)",
             "!u(x).'u<x>",
             "a(x).1 + b(y).1 | c(z).1",
             "'u<>",
             "u().1",
         }) {
        PP p = P(s);
        PP q = P(to_string(p));
        CAPTURE(s, to_string(p));
        REQUIRE(alpha_equal(p, q));
    }
}

TEST_CASE("printer avoids capture when spellings collide") {
    PP p = P("u(x).'v<x>");
    PP q = substitute(p, Subst{{mkname("v"), mkname("x")}});
    REQUIRE(to_string(q) == "u(x').'x<x'>");
    REQUIRE(alpha_equal(P(to_string(q)), q));
}

TEST_CASE("output macro expansion duplicates shared payload names") {
    PP p = P("'u<x,x>");
    PP e = expand_output_macro(p);
    REQUIRE(to_string(e) == "'u(y1,y2).(x ~ y1 | x ~ y2)");
}

TEST_CASE("fusion rewriting makes fused subjects interchangeable") {
    std::string a = normal_key(P("x ~ y | 'x<u>"));
    std::string b = normal_key(P("y ~ x | 'y<u>"));
    REQUIRE(a == b);
}

TEST_CASE("hidden equators vanish") {
    REQUIRE(normal_key(P("nu x. (x ~ y)")) == normal_key(P("1")));
    REQUIRE(normal_key(P("x ~ x")) == normal_key(P("1")));
    REQUIRE(normal_key(P("nu x. 1")) == normal_key(P("1")));
}

TEST_CASE("parallel composition is commutative, associative, has unit") {
    std::string a = normal_key(P("(u(x).1 | 1) | v(y).1"));
    std::string b = normal_key(P("v(y).1 | u(x).1"));
    REQUIRE(a == b);
}

TEST_CASE("scope extrusion happens when the name is not shared") {
    std::string a = normal_key(P("u(y).1 | nu x. x(z).1"));
    std::string b = normal_key(P("nu x. (u(y).1 | x(z).1)"));
    REQUIRE(a == b);
}

TEST_CASE("name equivalence follows unguarded fusions only") {
    REQUIRE(unifies(P("x ~ z | z ~ y"), mkname("x"), mkname("y")));
    REQUIRE(unifies(P("nu z. (x ~ z | z ~ y)"), mkname("x"), mkname("y")));
    REQUIRE_FALSE(unifies(P("u(x).(y ~ z)"), mkname("y"), mkname("z")));
    REQUIRE(unifies(P("1"), mkname("w"), mkname("w")));
}

TEST_CASE("basic communication produces one reduction") {
    auto rs = reduce(P("u(x).1 | 'u(y).1"));
    REQUIRE(rs.size() == 1);
    REQUIRE(canonical_key(rs[0]) == normal_key(P("1")));
}

TEST_CASE("communication merges payloads through fusions") {
    auto rs = reduce(P("u(x).'w<x> | 'u(y).(y ~ v)"));
    REQUIRE(rs.size() == 1);
    REQUIRE(canonical_key(rs[0]) == normal_key(P("'w<v>")));
}

TEST_CASE("fused subjects allow communication") {
    auto rs = reduce(P("u ~ v | u(x).1 | 'v(y).1"));
    REQUIRE(rs.size() == 1);
    REQUIRE(canonical_key(rs[0]) == normal_key(P("u ~ v")));
}

TEST_CASE("mismatched arities do not communicate") {
    REQUIRE(reduce(P("u(x,y).1 | 'u(z).1")).empty());
}

TEST_CASE("hiding the subject suppresses the action but not tau") {
    auto ts = transitions(P("nu u. (u(x).1 | 'u(y).1)"));
    bool any_visible = false, any_tau = false;
    for (auto& t : ts) {
        if (t.label.visible()) any_visible = true;
        if (t.label.kind == Label::Kind::Tau) any_tau = true;
    }
    REQUIRE_FALSE(any_visible);
    REQUIRE(any_tau);
}

TEST_CASE("replication unfolds lazily") {
    auto ts = transitions(P("!u(x).1"));
    REQUIRE(ts.size() == 1);
    REQUIRE(normal_key(ts[0].target) == normal_key(P("!u(x).1")));
}

TEST_CASE("choice offers each branch and fires exactly one") {
    PP p = P("a(x).'l<x> + b(y).'r<y>");
    auto ts = transitions(p);
    REQUIRE(ts.size() == 2);
    auto rs = reduce(par(p, P("'a(z).1")));
    REQUIRE(rs.size() == 1);
    REQUIRE(canonical_key(rs[0]) == normal_key(P("nu z. 'l<z>")));
}

TEST_CASE("hidden equator is bisimilar to nothing at all") {
    REQUIRE(bisimilar(P("nu x. (x ~ y)"), P("1")) == Verdict::Yes);
}

TEST_CASE("replication law: bang equals one unfolding") {
    REQUIRE(bisimilar(P("!u(x).1"), P("u(x).!u(x).1")) == Verdict::Yes);
}

TEST_CASE("choice is commutative up to bisimilarity") {
    REQUIRE(bisimilar(P("a(x).1 + b(y).1"), P("b(y).1 + a(x).1")) == Verdict::Yes);
}

TEST_CASE("different subjects are told apart") {
    REQUIRE(bisimilar(P("u(x).1"), P("v(x).1")) == Verdict::No);
    REQUIRE(bisimilar(P("u(x).1"), P("1")) == Verdict::No);
}

TEST_CASE("free fusions are part of the observable state") {
    REQUIRE(bisimilar(P("x ~ y"), P("1")) == Verdict::No);
    REQUIRE(bisimilar(P("x ~ y"), P("y ~ x")) == Verdict::Yes);
}

TEST_CASE("deep differences beyond the depth budget come back unknown") {
    std::string deep_a = "1", deep_b = "1";
    for (int i = 14; i >= 0; --i) {
        std::string u = "u" + std::to_string(i);
        deep_a = u + "(x)." + (i == 14 ? "a(x).1" : deep_a);
        deep_b = u + "(x)." + (i == 14 ? "b(x).1" : deep_b);
    }
    Budget tight;
    tight.bisim_depth = 12;
    REQUIRE(bisimilar(P(deep_a), P(deep_b), tight) == Verdict::Unknown);
    Budget wide;
    wide.bisim_depth = 20;
    REQUIRE(bisimilar(P(deep_a), P(deep_b), wide) == Verdict::No);
}

TEST_CASE("equator under a prefix is not absorbed") {
    REQUIRE(normal_key(P("u(x).(y ~ z)")) != normal_key(P("u(x).1")));
}
