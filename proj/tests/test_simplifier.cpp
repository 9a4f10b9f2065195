#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"
#include "loopinv/wlp.hpp"

using namespace loopinv;

namespace {
const Expr x = var("x"), y = var("y"), z = var("z"), n = var("n"), k = var("k"), v = var("v"), w = var("w");
const Expr kn = k ^ n;
const Expr odd = eq(x % num(2), num(1));

void check_log(const SimpResult& r, std::uint64_t bound = 5) {
  for (const auto& rw : r.log) {
    const auto c = support::check_claim(rw, bound);
    INFO(to_string(rw.rule), ": ", pretty(rw.before), "  ~>  ", pretty(rw.after), " fails on ", format_store(c.witness));
    CHECK(c.ok);
  }
}
}  // namespace

TEST_CASE("worked examples") {
  CHECK(simplify(truth(true), !lt(x, n) && eq(y, kn)) == (ge(x, n) && eq(y, kn)));
  CHECK(simplify(lt(x, n), ge(x + num(1), n) && eq(y * k, kn)) == (eq(x + num(1), n) && eq(y * k, kn)));
  CHECK(simplify(lt(x, n), eq((x + num(1)) + num(1), n) && eq((y * k) * k, kn)) ==
        (eq(x + (num(1) + num(1)), n) && eq(y * (k * k), kn)));
  CHECK(simplify(gt(x, num(0)), implies(!odd, le(x / num(2), num(0)) && eq(y, kn))).is_true());
  CHECK(simplify(gt(x, num(0)), implies(odd, le(x / num(2), num(0)) && eq(y * z, kn))) ==
        (eq(x, num(1)) && eq(y * z, kn)));
  CHECK(simplify(gt(x, num(0)), implies(odd, eq(x / num(2), v) && eq((y * z) * ((z * z) * w), kn))) ==
        (eq(x, (num(2) * v) + num(1)) && eq(y * (z * (z * (z * w))), kn)));
}

TEST_CASE("rules can be switched off") {
  SimpConfig cfg;
  cfg.disabled.insert(Rule::R3);
  CHECK(simplify(lt(x, n), ge(x + num(1), n), cfg) == ge(x + num(1), n));
  cfg.disabled = {Rule::R1};
  CHECK(simplify(truth(true), !lt(x, n), cfg) == !lt(x, n));
  cfg.disabled = {Rule::R2};
  CHECK(simplify(truth(true), eq((x + num(1)) + num(1), n), cfg) == eq((x + num(1)) + num(1), n));
  CHECK(parse_rule("R4") == Rule::R4);
  CHECK_FALSE(parse_rule("R9"));
}

TEST_CASE("literal relations, units and duplicates") {
  CHECK(simplify(truth(true), eq(num(1), num(1)) && lt(x, n)) == lt(x, n));
  CHECK(simplify(truth(true), lt(num(2), num(1)) && lt(x, n)).is_false());
  CHECK(simplify(truth(true), lt(x, n) && lt(x, n)) == lt(x, n));
  CHECK(simplify(truth(true), !!lt(x, n)) == lt(x, n));
  // context facts are assumed, not repeated
  CHECK(simplify(lt(x, n), lt(x, n) && eq(y, k)) == eq(y, k));
}

TEST_CASE("bounded search") {
  CHECK(find_model({gt(x, num(0)), lt(x, num(2))}, 8) == Store{{"x", 1}});
  CHECK_FALSE(find_model({gt(x, num(3)), lt(x, num(2))}, 8));
  CHECK_FALSE(find_model({eq(x / y, num(1))}, 0));
}

TEST_CASE("every rewrite on the worked examples is sound") {
  check_log(simplify_logged(lt(x, n), ge(x + num(1), n) && eq(y * k, kn)));
  check_log(simplify_logged(gt(x, num(0)), implies(!odd, le(x / num(2), num(0)) && eq(y, kn))));
  check_log(simplify_logged(gt(x, num(0)), implies(odd, eq(x / num(2), v) && eq((y * z) * ((z * z) * w), kn))), 4);
}

TEST_CASE("every rewrite on random wlp paths is sound") {
  support::Rng rng(5);
  const std::vector<std::string> vars = {"x", "y", "n"};
  std::uint64_t rewrites = 0;
  for (int i = 0; i < 300; ++i) {
    const Stmt s = support::random_loop_free(rng, 3, vars);
    const Expr q = support::random_bool(rng, 2, vars);
    const Expr ctx = support::random_bool(rng, 1, vars);
    for (const auto& path : expand_paths(wlp(s, q))) {
      const SimpResult r = simplify_logged(ctx, path.formula());
      rewrites += r.log.size();
      check_log(r, 4);
    }
  }
  CHECK(rewrites > 100);
}

TEST_CASE("parity rewrites on random even and odd facts") {
  support::Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const Expr t = support::random_nat(rng, 1, {"x", "y"});
    const Expr u = support::random_nat(rng, 1, {"y", "n"});
    const Expr parity = support::pick(rng, 2) ? eq(t % num(2), num(1)) : !(eq(t % num(2), num(1)));
    const Expr ctx = support::pick(rng, 2) ? parity : truth(true);
    const Expr body = support::pick(rng, 2) ? eq(t / num(2), u) : le(t / num(2), num(0));
    check_log(simplify_logged(ctx, implies(parity, body)), 4);
    check_log(simplify_logged(truth(true), parity && body), 4);
  }
}

TEST_CASE("the rewrite budget is honoured") {
  SimpConfig cfg;
  cfg.max_rewrite_steps = 1;
  const SimpResult r = simplify_logged(truth(true), !!!lt(x, n), cfg);
  CHECK(r.budget_exceeded);
  CHECK(r.log.size() == 1);
}
