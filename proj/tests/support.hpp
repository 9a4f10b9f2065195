#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "loopinv/evaluator.hpp"
#include "loopinv/expr.hpp"
#include "loopinv/parser.hpp"
#include "loopinv/simplifier.hpp"
#include "loopinv/stmt.hpp"

namespace loopinv {
inline std::ostream& operator<<(std::ostream& o, const Expr& e) { return o << pretty(e); }
inline std::ostream& operator<<(std::ostream& o, const Stmt& s) { return o << pretty(s); }
}  // namespace loopinv

namespace support {

using namespace loopinv;

using Rng = std::mt19937_64;

inline std::uint64_t pick(Rng& rng, std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); }

template <class T>
const T& choose(Rng& rng, const std::vector<T>& xs) {
  return xs[pick(rng, xs.size())];
}

inline Triple load(const std::string& name) {
  return parse_program(read_source(std::string(LOOPINV_CORPUS_DIR) + "/" + name).text);
}

inline Stmt first_loop(const Triple& t) { return loops_innermost_first(t.program).back(); }

/// Natural-valued program expression over `vars`, numerals 0..3.
inline Expr random_nat(Rng& rng, int depth, const std::vector<std::string>& vars) {
  if (depth <= 0 || pick(rng, 3) == 0) {
    if (pick(rng, 2) == 0) return num(pick(rng, 4));
    return var(choose(rng, vars));
  }
  static const std::vector<OpKind> ops = {OpKind::Add, OpKind::Sub, OpKind::Mul, OpKind::Div, OpKind::Mod, OpKind::Pow};
  const OpKind k = choose(rng, ops);
  Expr a = random_nat(rng, depth - 1, vars);
  // Small exponents keep most values in range.
  Expr b = k == OpKind::Pow ? (pick(rng, 2) ? num(pick(rng, 3)) : var(choose(rng, vars))) : random_nat(rng, depth - 1, vars);
  return op(k, a, b);
}

inline Expr random_bool(Rng& rng, int depth, const std::vector<std::string>& vars) {
  static const std::vector<OpKind> rels = {OpKind::Lt, OpKind::Gt, OpKind::Le, OpKind::Ge, OpKind::Eq, OpKind::Ne};
  if (depth <= 0 || pick(rng, 3) == 0) {
    if (pick(rng, 10) == 0) return truth(pick(rng, 2) == 0);
    return op(choose(rng, rels), random_nat(rng, 1, vars), random_nat(rng, 1, vars));
  }
  switch (pick(rng, 4)) {
    case 0: return !random_bool(rng, depth - 1, vars);
    case 1: return random_bool(rng, depth - 1, vars) && random_bool(rng, depth - 1, vars);
    case 2: return random_bool(rng, depth - 1, vars) || random_bool(rng, depth - 1, vars);
    default: return implies(random_bool(rng, depth - 1, vars), random_bool(rng, depth - 1, vars));
  }
}

/// Loop-free statement of nesting depth ≤ depth.
inline Stmt random_loop_free(Rng& rng, int depth, const std::vector<std::string>& vars) {
  if (depth <= 0 || pick(rng, 4) == 0) {
    if (pick(rng, 6) == 0) return skip();
    return assign(choose(rng, vars), random_nat(rng, 2, vars));
  }
  switch (pick(rng, 3)) {
    case 0: return seq(random_loop_free(rng, depth - 1, vars), random_loop_free(rng, depth - 1, vars));
    case 1:
      return if_then_else(random_bool(rng, 1, vars), random_loop_free(rng, depth - 1, vars),
                          random_loop_free(rng, depth - 1, vars));
    default: return block({"t"}, seq(assign("t", random_nat(rng, 1, vars)), random_loop_free(rng, depth - 1, vars)));
  }
}

/// Terms over a fixed functor alphabet: + * = ∧, Succ, numerals 0..2, variables a b c.
inline Expr random_term(Rng& rng, int depth) {
  if (depth <= 0 || pick(rng, 4) == 0) {
    switch (pick(rng, 3)) {
      case 0: return num(pick(rng, 3));
      default: return var(std::string(1, static_cast<char>('a' + pick(rng, 3))));
    }
  }
  switch (pick(rng, 5)) {
    case 0: return random_term(rng, depth - 1) + random_term(rng, depth - 1);
    case 1: return random_term(rng, depth - 1) * random_term(rng, depth - 1);
    case 2: return eq(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 3: return random_term(rng, depth - 1) && random_term(rng, depth - 1);
    default: return ctor(CtorKind::Succ, {var(std::string(1, static_cast<char>('a' + pick(rng, 3))))});
  }
}

/// Every store over `names` with values 0..bound; f returns false to stop.
inline void for_each_store(const std::vector<std::string>& names, std::uint64_t bound,
                           const std::function<bool(const Store&)>& f) {
  std::vector<std::uint64_t> d(names.size(), 0);
  for (;;) {
    Store s;
    for (std::size_t i = 0; i < names.size(); ++i) s[names[i]] = d[i];
    if (!f(s)) return;
    std::size_t i = names.size();
    for (;;) {
      if (i == 0) return;
      --i;
      if (d[i] < bound) {
        ++d[i];
        break;
      }
      d[i] = 0;
    }
  }
}

inline std::vector<std::string> names_of(const std::vector<Expr>& es) {
  VarSet all;
  for (const auto& e : es)
    for (const auto& v : free_vars(e)) all.insert(v);
  return {all.begin(), all.end()};
}

/// Independent reference semantics on program expressions: wide integers, no shared helpers.
/// nullopt on division by zero or a value leaving 64 bits.
inline std::optional<unsigned __int128> oracle_eval(const Expr& e, const Store& s) {
  using W = unsigned __int128;
  const W limit = static_cast<W>(~std::uint64_t{0});
  if (auto* n = e.as<node::Num>()) return n->value;
  if (auto* v = e.as<node::Var>()) return s.at(v->name);
  if (e.is_true()) return 1;
  if (e.is_false()) return 0;
  auto* o = e.as<node::Op>();
  auto a = oracle_eval(o->args[0], s);
  if (!a) return std::nullopt;
  if (o->op == OpKind::Not) return *a ? 0 : 1;
  if (o->op == OpKind::And && !*a) return 0;
  if (o->op == OpKind::Or && *a) return 1;
  if (o->op == OpKind::Implies && !*a) return 1;
  auto b = oracle_eval(o->args[1], s);
  if (!b) return std::nullopt;
  W r = 0;
  switch (o->op) {
    case OpKind::Add: r = *a + *b; break;
    case OpKind::Sub: r = *a > *b ? *a - *b : 0; break;
    case OpKind::Mul: r = *a * *b; break;
    case OpKind::Div:
      if (*b == 0) return std::nullopt;
      r = *a / *b;
      break;
    case OpKind::Mod:
      if (*b == 0) return std::nullopt;
      r = *a % *b;
      break;
    case OpKind::Pow:
      if (*b == 0) r = 1;
      else if (*a <= 1) r = *a;
      else {
        r = 1;
        for (W i = 0; i < *b; ++i) {
          r *= *a;
          if (r > limit) return std::nullopt;
        }
      }
      break;
    case OpKind::And:
    case OpKind::Or:
    case OpKind::Implies: r = *b ? 1 : 0; break;
    case OpKind::Lt: r = *a < *b; break;
    case OpKind::Gt: r = *a > *b; break;
    case OpKind::Le: r = *a <= *b; break;
    case OpKind::Ge: r = *a >= *b; break;
    case OpKind::Eq: r = *a == *b; break;
    case OpKind::Ne: r = *a != *b; break;
    default: return std::nullopt;
  }
  if (r > limit) return std::nullopt;
  return r;
}

/// Outcome of checking one logged rewrite over every store with variables ≤ bound.
struct ClaimCheck {
  bool ok = true;
  std::uint64_t stores = 0;
  std::uint64_t error_stores = 0;
  Store witness;
};

/// Equivalent: same truth value wherever neither side errors. Strengthens: after ⇒ before.
/// Unsatisfiable: before never holds.
inline ClaimCheck check_claim(const Rewrite& r, std::uint64_t bound) {
  ClaimCheck c;
  for_each_store(names_of({r.before, r.after}), bound, [&](const Store& s) {
    ++c.stores;
    bool e1 = false, e2 = false;
    const bool b = holds(r.before, s, &e1);
    const bool a = holds(r.after, s, &e2);
    bool bad = false;
    switch (r.claim) {
      case Rewrite::Claim::Equivalent:
        if (e1 || e2) {
          ++c.error_stores;
          return true;
        }
        bad = a != b;
        break;
      case Rewrite::Claim::Strengthens:
        if (e1 || e2) {
          ++c.error_stores;
          return true;
        }
        bad = a && !b;
        break;
      case Rewrite::Claim::Unsatisfiable:
        if (e1) {
          ++c.error_stores;
          return true;
        }
        bad = b;
        break;
    }
    if (bad) {
      c.ok = false;
      c.witness = s;
      return false;
    }
    return true;
  });
  return c;
}

}  // namespace support
