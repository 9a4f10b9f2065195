#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace loopinv;

namespace {
const Expr x = var("x"), y = var("y"), n = var("n"), k = var("k"), v = var("v");
}

TEST_CASE("counting exponentiation program") {
  const Triple t = parse_program(R"({n >= 0}
x := 0;
y := 1;
WHILE x < n DO
   BEGIN
      x := x+1;
      y := y*k
   END
{y = k^n})");
  CHECK(t.pre == ge(n, num(0)));
  CHECK(t.post == eq(y, k ^ n));
  const Stmt body = seq(assign("x", x + num(1)), assign("y", y * k));
  const Stmt expected = seq({assign("x", num(0)), assign("y", num(1)), while_loop(lt(x, n), block({}, body))});
  CHECK(t.program == expected);
}

TEST_CASE("trivial triple and incomplete input") {
  const Triple t = parse_program("{True} SKIP {True}");
  CHECK(t.pre.is_true());
  CHECK(t.post.is_true());
  CHECK(t.program == skip());
  CHECK_THROWS_AS(parse_stmt("WHILE x<n DO"), ParseError);
  try {
    parse_program("{True}\nWHILE x<n DO");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK_FALSE(e.expected().empty());
  }
}

TEST_CASE("pretty printing") {
  CHECK(pretty(x + (num(1) + v)) == "x+(1+v)");
  CHECK(pretty(ctor(CtorKind::Succ, {ctor(CtorKind::Succ, {ctor(CtorKind::Zero)})})) == "2");
  CHECK(pretty(implies(eq(x % num(2), num(1)), le(x / num(2), num(0)))) == "x%2=1 ⇒ x/2≤0");
  CHECK(pretty(eq((num(2) * v) + num(1), x)) == "(2*v)+1=x");
  CHECK(pretty(!(lt(x, n))) == "¬(x<n)");
  CHECK(pretty(eq(y * (k * k), k ^ n) && ge(x, n)) == "y*(k*k)=k^n ∧ x≥n");
}

TEST_CASE("precedence and associativity") {
  CHECK(parse_expr("x + y * k") == x + (y * k));
  CHECK(parse_expr("x - y - k") == (x - y) - k);
  CHECK(parse_expr("k ^ n * 2") == (k ^ n) * num(2));
  CHECK(parse_expr("x=1 => y=1 => n=1") == implies(eq(x, num(1)), implies(eq(y, num(1)), eq(n, num(1)))));
  CHECK(parse_expr("x < n /\\ y = 1 \\/ x = 0") == ((lt(x, n) && eq(y, num(1))) || eq(x, num(0))));
  CHECK(parse_expr("~(x < n)") == !lt(x, n));
  CHECK_THROWS_AS(parse_expr("~x < n"), ParseError);
  CHECK(parse_expr("x ≥ n ∧ y ≠ 0") == (ge(x, n) && ne(y, num(0))));
  CHECK_THROWS_AS(parse_expr("x < y < z"), ParseError);
  CHECK_THROWS_AS(parse_expr("x + (y < z)"), ParseError);
}

TEST_CASE("keywords are case-insensitive and comments skipped") {
  const Stmt a = parse_stmt("while x < n do -- count\n x := x + 1");
  const Stmt b = parse_stmt("WHILE x<n DO x:=x+1");
  CHECK(a == b);
}

TEST_CASE("loop annotations") {
  const Stmt s = parse_stmt("WHILE z<k DO {z<=k} BEGIN z:=z+1 END {z=k}; y:=z");
  const auto parts = flatten_seq(s);
  REQUIRE(parts.size() == 2);
  auto* w = parts[0].as<stmt::While>();
  REQUIRE(w);
  CHECK(w->invariant == le(var("z"), k));
  CHECK(w->post == eq(var("z"), k));
}

TEST_CASE("round trip of random expressions") {
  support::Rng rng(3);
  const std::vector<std::string> vars = {"x", "y", "n"};
  for (int i = 0; i < 1000; ++i) {
    const Expr e = i % 2 ? support::random_nat(rng, 4, vars) : support::random_bool(rng, 3, vars);
    INFO(pretty(e));
    CHECK(parse_expr(pretty(e)) == e);
  }
}

TEST_CASE("round trip of random programs") {
  support::Rng rng(4);
  const std::vector<std::string> vars = {"x", "y", "n"};
  for (int i = 0; i < 300; ++i) {
    const Triple t{support::random_bool(rng, 2, vars), support::random_loop_free(rng, 4, vars),
                   support::random_bool(rng, 2, vars)};
    const std::string text = pretty(t);
    INFO(text);
    const Triple back = parse_program(text);
    CHECK(back.pre == t.pre);
    CHECK(back.post == t.post);
    CHECK(pretty(back) == text);
  }
}

TEST_CASE("corpus files parse and print back") {
  for (const char* f : {"exp_simple.imp", "exp_binary.imp", "exp_nested.imp", "exp_swapped.imp", "exp_annotated.imp"}) {
    const Triple t = support::load(f);
    const Triple again = parse_program(pretty(t));
    CHECK(again.program == t.program);
  }
}
