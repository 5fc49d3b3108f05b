#include <doctest.h>

#include "proofsynth/errors.hpp"
#include "proofsynth/sexpr.hpp"
#include "proofsynth/typing.hpp"

using namespace proofsynth;

TEST_CASE("typecheck basic judgments") {
    // |- lam x. x : a -> a
    CHECK(typecheck({}, parse_term("(lam x (var x))"), parse_prop("(imp (var a) (var a))")));
    // the identity also types at any instance
    CHECK(typecheck({}, parse_term("(lam x (var x))"),
                    parse_prop("(imp (prod (var a) (var b)) (prod (var a) (var b)))")));
    CHECK(!typecheck({}, parse_term("(lam x (var x))"), parse_prop("(imp (var a) (var b))")));
    // K combinator
    CHECK(typecheck({}, parse_term("(lam x (lam y (var x)))"),
                    parse_prop("(imp (var a) (imp (var b) (var a)))")));
    // context lookup, rightmost binding shadows
    TypingContext ctx = {{"x", pvar("a")}, {"x", pvar("b")}};
    CHECK(typecheck(ctx, parse_term("(var x)"), pvar("b")));
    CHECK(!typecheck(ctx, parse_term("(var x)"), pvar("a")));
    // unbound variable
    CHECK(!typecheck({}, parse_term("(var x)"), pvar("a")));
}

TEST_CASE("holes take any type") {
    CHECK(typecheck({}, hole(0), pvar("a")));
    CHECK(typecheck({}, parse_term("(lam x (hole 0))"), parse_prop("(imp (var a) (var b))")));
    // but structure above the hole still constrains
    CHECK(!typecheck({}, parse_term("(lam x (hole 0))"), pvar("a")));
    CHECK(typecheck({}, parse_term("(pair (hole 0) (hole 1))"),
                    parse_prop("(prod (var a) (var b))")));
}

TEST_CASE("occurs check rejects self-application") {
    CHECK(!infer_principal(parse_term("(lam x (app (var x) (var x)))")).has_value());
}

TEST_CASE("infer_principal on closed proofs") {
    auto k = infer_principal(parse_term("(lam x (lam y (var x)))"));
    REQUIRE(k.has_value());
    CHECK(print_prop(canonical_rename(k->principal)) ==
          "(imp (var a) (imp (var b) (var a)))");
    CHECK(k->obligations.empty());

    auto fst = infer_principal(parse_term("(lam p (casepair (var p) x y (var x)))"));
    REQUIRE(fst.has_value());
    CHECK(print_prop(canonical_rename(fst->principal)) ==
          "(imp (prod (var a) (var b)) (var a))");

    auto inl = infer_principal(parse_term("(lam x (left (var x)))"));
    REQUIRE(inl.has_value());
    CHECK(print_prop(canonical_rename(inl->principal)) ==
          "(imp (var a) (sum (var a) (var b)))");
}

TEST_CASE("infer_principal renders residual metavariables as fresh atoms") {
    // lam x. hole : the hole's type is unconstrained
    auto r = infer_principal(parse_term("(lam x (hole 0))"));
    REQUIRE(r.has_value());
    CHECK(print_prop(r->principal) == "(imp (var _0) (var _1))");
    REQUIRE(r->obligations.count(0));
    CHECK(print_prop(r->obligations.at(0)) == "(var _1)");

    // app hole hole: function obligations mention the argument meta
    auto r2 = infer_principal(parse_term("(app (hole 0) (hole 1))"));
    REQUIRE(r2.has_value());
    CHECK(print_prop(r2->principal) == "(var _0)");
    CHECK(print_prop(r2->obligations.at(0)) == "(imp (var _1) (var _0))");
    CHECK(print_prop(r2->obligations.at(1)) == "(var _1)");
}

TEST_CASE("infer_with_goal specializes obligations") {
    auto goal = parse_prop("(imp (var a) (var a))");
    auto r = infer_with_goal(parse_term("(lam x (hole 0))"), goal);
    REQUIRE(r.has_value());
    CHECK(print_prop(r->principal) == "(imp (var a) (var a))");
    CHECK(print_prop(r->obligations.at(0)) == "(var a)");

    CHECK(!infer_with_goal(parse_term("(lam x (var x))"), parse_prop("(imp (var a) (var b))"))
               .has_value());
}

TEST_CASE("case typing joins the branches") {
    auto t = parse_term("(lam s (casesum (var s) x (var x) y (var y)))");
    auto r = infer_principal(t);
    REQUIRE(r.has_value());
    CHECK(print_prop(canonical_rename(r->principal)) ==
          "(imp (sum (var a) (var a)) (var a))");
}

TEST_CASE("annotate carries types at every node") {
    auto p = parse_prop("(imp (var a) (imp (var b) (var a)))");
    auto t = parse_term("(lam x (lam y (var x)))");
    auto typed = annotate(t, p);
    CHECK(prop_eq(typed->type, p));
    CHECK(print_prop(typed->children[0]->type) == "(imp (var b) (var a))");
    CHECK(print_prop(typed->children[0]->children[0]->type) == "(var a)");
    CHECK_THROWS_AS(annotate(t, pvar("a")), IllTyped);
}

TEST_CASE("rule_at reads the inference rule from an annotated tree") {
    auto p = parse_prop("(imp (var a) (imp (var b) (var a)))");
    auto typed = annotate(parse_term("(lam x (lam y (var x)))"), p);
    CHECK(rule_at(typed, {}) == Rule::Abs);
    Path rho = {{OneDepthContext{TermKind::Abs, "x", ""}, 0}};
    CHECK(rule_at(typed, rho) == Rule::Abs);
    rho.push_back({OneDepthContext{TermKind::Abs, "y", ""}, 0});
    CHECK(rule_at(typed, rho) == Rule::Var);
    rho.push_back({OneDepthContext{TermKind::Abs, "", ""}, 0});
    CHECK_THROWS_AS(rule_at(typed, rho), BadPath);

    auto partial = annotate(parse_term("(lam x (hole 0))"),
                            parse_prop("(imp (var a) (var b))"));
    Path inside = {{OneDepthContext{TermKind::Abs, "x", ""}, 0}};
    CHECK_THROWS_AS(rule_at(partial, inside), HoleAtPath);
}

TEST_CASE("bound_vars_at returns binders in scope with inferred types") {
    auto m = parse_term("(lam p (casepair (var p) x y (hole 0)))");
    auto hs = holes(m);
    REQUIRE(hs.size() == 1);
    auto ctx = bound_vars_at(m, hs[0].path);
    REQUIRE(ctx.size() == 3);
    CHECK(ctx[0].name == "p");
    CHECK(ctx[1].name == "x");
    CHECK(ctx[2].name == "y");
    // p : x_ty * y_ty, all rendered consistently
    CHECK(prop_eq(ctx[0].type, pprod(ctx[1].type, ctx[2].type)));

    CHECK_THROWS_AS(bound_vars_at(m, Path{{OneDepthContext{TermKind::App, "", ""}, 0}}), BadPath);
    CHECK_THROWS_AS(bound_vars_at(parse_term("(app (var x) (var x))"), {}), IllTyped);
}

TEST_CASE("subject check: annotate agrees with typecheck") {
    auto t = parse_term(
        "(lam s (casesum (var s) x (right (var x)) y (left (var y))))");
    auto inf = infer_principal(t);
    REQUIRE(inf.has_value());
    auto p = canonical_rename(inf->principal);
    CHECK(print_prop(p) == "(imp (sum (var a) (var b)) (sum (var b) (var a)))");
    CHECK(typecheck({}, t, p));
    CHECK_NOTHROW(annotate(t, p));
}
