#pragma once

#include <stdexcept>
#include <vector>

#include "loopinv/expr.hpp"
#include "loopinv/stmt.hpp"

namespace loopinv {

class UnannotatedLoop : public std::runtime_error {
 public:
  explicit UnannotatedLoop(SourceLoc loc);
  SourceLoc loc;
};

/// How a While nested inside the statement is handled.
/// Invariant: I ∧ ((B∧I) ⇒ WLP(S,I)) ∧ ((¬B∧I) ⇒ Q), needs an invariant.
/// Substitute: the loop stands for the assignments v:=e read off its `{v=e ∧ …}` postcondition.
enum class WlpLoopMode { Invariant, Substitute };

/// Weakest liberal precondition, purely structural (no simplification).
Expr wlp(const Stmt& st, const Expr& q, WlpLoopMode mode = WlpLoopMode::Invariant);

/// Splits top-level ∧ only.
std::vector<Expr> top_conjuncts(const Expr& p);

/// One alternative of a WLP formula: the antecedents that select it and the facts it requires.
struct WlpPath {
  std::vector<Expr> antecedents;
  std::vector<Expr> body;

  /// (∧antecedents ⇒ ∧body), or ∧body when there are no antecedents.
  Expr formula() const;
};

/// Implication conjuncts are alternatives (one per branch), the other conjuncts are shared
/// by every alternative. A formula without implications is a single path.
std::vector<WlpPath> expand_paths(const Expr& p);

struct VCSet {
  Expr establishment;
  Expr preservation;
  Expr sufficiency;
};

/// Requires loop.invariant.
VCSet vcs_for_loop(const Expr& pre_ctx, const Stmt& loop, const Expr& post,
                   WlpLoopMode mode = WlpLoopMode::Invariant);

/// Forward pass of `pre` through straight-line code: an assignment v:=e drops the
/// conjuncts mentioning v and adds v=e when v does not occur in e. Other statements only drop.
Expr entry_context(const Expr& pre, const std::vector<Stmt>& prefix);

}  // namespace loopinv
