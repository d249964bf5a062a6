#include <catch2/catch_amalgamated.hpp>

#include "fuspi/lam/ast.hpp"
#include "fuspi/lam/sigma.hpp"

using namespace fuspi;
using namespace fuspi::lam;

static MP P(const std::string& s) { return parse_term(s); }
static TP T(const std::string& s) { return parse_type(s); }

TEST_CASE("type syntax round-trips with the right precedences") {
    CHECK(to_string(T("X -> Y -> Z")) == "X -> Y -> Z");
    CHECK(to_string(T("(X -> Y) -> Z")) == "(X -> Y) -> Z");
    CHECK(to_string(T("X * Y + Z -> W")) == "X * Y + Z -> W");
    CHECK(to_string(T("X * (Y + Z)")) == "X * (Y + Z)");
    CHECK(to_string(T("forall X. X -> X")) == "forall X. X -> X");
    CHECK(to_string(T("(forall X. X) -> Y")) == "(forall X. X) -> Y");
    CHECK(type_equal(T("X -> Y -> Z"), T("X -> (Y -> Z)")));
    CHECK_FALSE(type_equal(T("X -> Y -> Z"), T("(X -> Y) -> Z")));
}

TEST_CASE("type alpha equality and substitution avoid capture") {
    CHECK(type_equal(T("forall X. X -> X"), T("forall Y. Y -> Y")));
    CHECK_FALSE(type_equal(T("forall X. X -> Y"), T("forall X. X -> Z")));
    TP t = tsubst(T("forall Y. X -> Y"), mkname("X"), T("Y"));
    CHECK(type_equal(t, T("forall W. Y -> W")));
    CHECK_FALSE(type_equal(t, T("forall W. W -> W")));
}

TEST_CASE("term syntax round-trips") {
    for (const char* s : {
             "\\x:X. x",
             "(\\x:X. x) y",
             "f x y",
             "f (x y)",
             "mu a.[b] m",
             "mu a:X.[a] m",
             "/\\X. \\x:X. x",
             "f [X] y",
             "(m, n)",
             "let (x, y) = p in x",
             "inl[Y] m",
             "inr[X] m",
             "case s of inl x. x | inr y. w",
             "case s of inl x. (\\z:X. z) x | inr y. w",
             "\\x. x x",
         }) {
        MP t = P(s);
        INFO(s);
        CHECK(to_string(t) == s);
        CHECK(alpha_equal(parse_term(to_string(t)), t));
    }
}

TEST_CASE("alpha equality is binder-name blind") {
    CHECK(alpha_equal(P("\\x:X. x"), P("\\y:X. y")));
    CHECK_FALSE(alpha_equal(P("\\x:X. x"), P("\\y:Y. y")));
    CHECK(alpha_equal(P("mu a.[a] m"), P("mu b.[b] m")));
    CHECK_FALSE(alpha_equal(P("mu a.[a] m"), P("mu a.[c] m")));
    CHECK(alpha_equal(P("/\\X. \\x:X. x"), P("/\\Y. \\x:Y. x")));
    CHECK(alpha_equal(P("let (x, y) = p in x"), P("let (a, b) = p in a")));
}

TEST_CASE("substitution is capture avoiding") {
    MP body = mlam(mkname("y"), nullptr, mvar(mkname("x")));
    MP r = substitute(body, {{mkname("x"), mvar(mkname("y"))}});
    CHECK(alpha_equal(r, P("\\z. y")));
    CHECK_FALSE(alpha_equal(r, P("\\z. z")));
}

TEST_CASE("typecheck gives the expected types") {
    auto X = mkname("X");
    CHECK(type_equal(typecheck(P("\\x:X. x")), T("X -> X")));
    CHECK(type_equal(typecheck(P("\\x:X. \\y:Y. x")), T("X -> Y -> X")));
    TypeCtx ctx{{mkname("f"), T("X -> Y")}, {mkname("x"), T("X")}};
    CHECK(type_equal(typecheck(P("f x"), ctx), T("Y")));
    CHECK(type_equal(typecheck(P("\\p:X * Y. let (a, b) = p in a")), T("X * Y -> X")));
    TypeCtx cs{{mkname("m"), T("X")}, {mkname("w"), T("X")}};
    CHECK(type_equal(typecheck(P("case inl[Y] m of inl x. x | inr y. w"), cs), T("X")));
    CHECK(type_equal(typecheck(P("/\\X. \\x:X. x")), T("forall X. X -> X")));
    CHECK(type_equal(typecheck(P("(/\\X. \\x:X. x) [Y -> Y]")), T("(Y -> Y) -> Y -> Y")));
    (void)X;
}

TEST_CASE("mu typing infers from named positions") {
    // Peirce's law inhabitant: the inner jump fixes the outer binder's type.
    MP callcc = P("\\f:(X -> Y) -> X. mu a.[a] f (\\x:X. mu d:Y.[a] x)");
    CHECK(type_equal(typecheck(callcc), T("((X -> Y) -> X) -> X")));

    TypeCtx ctx{{mkname("m"), T("X")}};
    CHECK(type_equal(typecheck(P("mu a.[a] m"), ctx), T("X")));

    TypeCtx muctx{{mkname("b"), T("X")}};
    CHECK_THROWS_WITH(typecheck(P("mu a.[b] m"), ctx, muctx),
                      Catch::Matchers::ContainsSubstring("cannot infer"));
    CHECK(type_equal(typecheck(P("mu a:Y.[b] m"), ctx, muctx), T("Y")));
}

TEST_CASE("typecheck rejects ill-typed terms with specific reasons") {
    TypeCtx ctx{{mkname("f"), T("Y")}, {mkname("m"), T("X")}, {mkname("w"), T("Y")}};
    CHECK_THROWS_WITH(typecheck(P("(\\x:X. x) f"), ctx),
                      Catch::Matchers::ContainsSubstring("argument type mismatch"));
    CHECK_THROWS_WITH(typecheck(P("m m"), ctx),
                      Catch::Matchers::ContainsSubstring("non-function"));
    CHECK_THROWS_WITH(typecheck(P("case inl[Y] m of inl x. x | inr y. y"), ctx),
                      Catch::Matchers::ContainsSubstring("branches disagree"));
    CHECK_THROWS_WITH(typecheck(P("mu a.[c] m"), ctx),
                      Catch::Matchers::ContainsSubstring("unbound mu-variable"));
    CHECK_THROWS_WITH(typecheck(P("\\x:X. /\\X. x"), {}),
                      Catch::Matchers::ContainsSubstring("occurs free in the context"));
    CHECK_THROWS_WITH(typecheck(P("\\x. x"), {}),
                      Catch::Matchers::ContainsSubstring("missing annotation"));
}

TEST_CASE("mu linearity distinguishes single jumps from control operators") {
    CHECK(mu_linear(P("mu a.[a] m")));
    CHECK(mu_linear(P("\\x:X. x")));
    CHECK_FALSE(mu_linear(P("mu a.[b] m")));  // binder never used
    // callcc names its binder twice
    CHECK_FALSE(mu_linear(P("\\f:(X -> Y) -> X. mu a.[a] f (\\x:X. mu d:Y.[a] x)")));
    CHECK(mu_linear(P("mu a.[a] f (\\x:X. x)")));
}

TEST_CASE("head form of a beta redex keeps the argument pending") {
    HeadForm h = sigma_normalize(P("(\\x. x) y"));
    CHECK(h.outer.empty());
    CHECK(h.args.empty());
    REQUIRE(h.inner.size() == 1);
    CHECK(h.inner[0].x == h.head);
    CHECK(alpha_equal(h.inner[0].arg, P("y")));
    CHECK(alpha_equal(to_term(h), P("(\\x. x) y")));
}

TEST_CASE("sigma moves do not change the head form") {
    CHECK(sigma_equivalent(P("((\\x. x) a) b"), P("(\\x. x b) a")));
    CHECK(sigma_equivalent(P("\\y. (\\x. x) a"), P("(\\x. \\y. x) a")));
    CHECK_FALSE(sigma_equivalent(P("(\\x. x) a"), P("a")));
    CHECK_FALSE(sigma_equivalent(P("((\\x. x) a) b"), P("(\\x. x a) b")));
}

TEST_CASE("head linear reduction walks the worked self-application example") {
    MP start = P("(\\x. x x) (\\y. y)");
    HeadForm h = sigma_normalize(start);
    auto s1 = hlr_step(h);
    REQUIRE(s1);
    CHECK(alpha_equal(to_term(*s1), to_term(sigma_normalize(P("(\\x. (\\y. y) x) (\\y. y)")))));

    int steps = 0;
    while (auto next = hlr_step(h)) {
        h = *next;
        ++steps;
        REQUIRE(steps < 50);
    }
    CHECK(steps == 3);
    REQUIRE(h.outer.size() == 1);
    CHECK(h.head == h.outer[0].x);
    CHECK(h.args.empty());
    CHECK(h.inner.size() == 2);
}

TEST_CASE("head linear reduction stops at free heads") {
    CHECK_FALSE(hlr_step(P("f a")));
    CHECK_FALSE(hlr_step(P("\\x. x")));
    CHECK(hlr_step(P("(\\x. x) a")));
}
