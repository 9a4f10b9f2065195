#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "loopinv/evaluator.hpp"
#include "loopinv/expr.hpp"

namespace loopinv {

/// R1 negation pushing, R2 right re-association, R3 bound tightening, R4 parity/division,
/// R5 implication under context, R6 unit laws, deduplication and literal relations.
enum class Rule { R1, R2, R3, R4, R5, R6 };

const char* to_string(Rule r);
std::optional<Rule> parse_rule(std::string_view name);

struct SimpConfig {
  std::uint64_t refutation_bound = 8;
  std::uint64_t max_rewrite_steps = 10000;
  std::set<Rule> disabled;
  /// Evaluate closed arithmetic to numerals. Off so that 1+1 and 2*1 survive as displayed.
  bool fold_literals = false;

  bool enabled(Rule r) const { return disabled.count(r) == 0; }
};

/// One logged rewrite and the semantic claim it makes about `before` and `after`.
struct Rewrite {
  enum class Claim {
    Equivalent,     // same value on every store where neither side errors
    Strengthens,    // after ⇒ before
    Unsatisfiable,  // before never holds; after is False
  };
  Rule rule;
  Expr before;
  Expr after;
  Claim claim = Claim::Equivalent;
};

struct SimpResult {
  Expr result;
  std::vector<Rewrite> log;
  bool budget_exceeded = false;
};

/// Normal form of p under the assumption `context`. The result is a right-nested conjunction
/// whose conjunction with the context is equivalent to context ∧ p, except that a top-level
/// implication A ⇒ C is replaced by its only feasible path A ∧ C, or by True when that path is
/// refuted by bounded search. Context facts are never repeated in the output.
SimpResult simplify_logged(const Expr& context, const Expr& p, const SimpConfig& cfg = {});
Expr simplify(const Expr& context, const Expr& p, const SimpConfig& cfg = {});

/// Store over the free variables of `facts`, each in 0..bound, on which every fact holds.
/// Stores where a fact raises an evaluation error do not count as models.
std::optional<Store> find_model(const std::vector<Expr>& facts, std::uint64_t bound);

}  // namespace loopinv
