#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loopinv/expr.hpp"

namespace loopinv {

/// Source of generalisation variables g1, g2, ... that skips reserved names.
class FreshSupply {
 public:
  explicit FreshSupply(VarSet reserved = {}, std::string prefix = "g")
      : reserved_(std::move(reserved)), prefix_(std::move(prefix)) {}

  std::string next();
  std::uint64_t counter() const { return counter_; }
  /// Every name handed out so far.
  const VarSet& issued() const { return issued_; }

 private:
  VarSet reserved_;
  std::string prefix_;
  std::uint64_t counter_ = 0;
  VarSet issued_;
};

struct GenResult {
  Expr generalised;
  Subst theta_left;
  Subst theta_right;
};

/// e1 ⊴ e2: variable, diving and coupling rules. Numerals count as Succ chains,
/// application spines of different arity are different functors.
bool embeds(const Expr& e1, const Expr& e2);
/// e1 ≼ e2: e1 ⊴ e2 with the coupling rule at the root.
bool coupled(const Expr& e1, const Expr& e2);

/// e1 ⊓ e2.
GenResult generalise(const Expr& e1, const Expr& e2, FreshSupply& fresh);
/// e1 △ e2: ⊓ followed by merging variables bound to the same pair of expressions.
GenResult msg(const Expr& e1, const Expr& e2, FreshSupply& fresh);
/// Left fold of △ over es with True members dropped; True if nothing is left.
Expr msg_list(const std::vector<Expr>& es, FreshSupply& fresh);

}  // namespace loopinv
