#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loopinv/engine.hpp"
#include "loopinv/evaluator.hpp"
#include "loopinv/stmt.hpp"

namespace loopinv {

struct SolverConfig {
  /// Free input variables range over 0..domain_bound.
  std::uint64_t domain_bound = 6;
  std::uint64_t template_depth = 2;
  std::vector<std::uint64_t> literal_pool = {0, 1, 2};
  std::vector<OpKind> operator_pool = {OpKind::Add, OpKind::Sub, OpKind::Mul,
                                       OpKind::Div, OpKind::Mod, OpKind::Pow};
  /// Loop iterations allowed per program run.
  std::uint64_t fuel = 512;
  /// Division used for templates and invariant instances; programs always run strict.
  DivMode division = DivMode::Total;
  /// Initial-value candidates kept for backtracking when no step fits.
  std::uint64_t initial_alternatives = 16;
  /// Final-value candidates per component offered to the universal sufficiency check.
  std::uint64_t final_alternatives = 8;
  /// Cap on candidate tuples for components with several variables or conditional steps.
  std::uint64_t tuple_cap = 200000;
};

/// v0, v(i+1) and vn for every generalisation variable. When `step_condition` is set the
/// step is `step` where it holds and `step_otherwise` where it does not.
struct Assignment {
  Subst initial;
  Subst step;
  std::optional<Expr> step_condition;
  Subst step_otherwise;
  Subst final;
};

struct Verdict {
  enum class Status { VerifiedUpToBound, Failed, NoCandidate, NotSolved };
  Status status = Status::NotSolved;
  /// 1 establishment, 2 preservation, 3 sufficiency; 0 when not applicable.
  int requirement = 0;
  Store counterexample;
  std::string note;
};

const char* to_string(Verdict::Status s);

struct SolverStats {
  std::uint64_t candidates_tried = 0;
  std::uint64_t stores_tested = 0;
};

struct InvariantReport {
  SourceLoc location;
  Expr invariant;
  Expr post;
  VarSet genvars;
  std::optional<Assignment> assignment;
  Verdict verdict;
  SolverStats stats;
  std::vector<std::string> lost_variables;
  std::optional<DerivationTrace> trace;
  std::optional<EngineFailure::Kind> engine_failure;
};

/// Instantiates the generalisation variables of `putative` for `loop` inside `t`, whose
/// postcondition is `post`, and checks the result with check_requirements.
InvariantReport solve(const Triple& t, const Stmt& loop, const Expr& putative, const VarSet& genvars,
                      const Expr& post, const SolverConfig& cfg = {});

/// Bounded check of the three requirements. Establishment is checked at every loop arrival of
/// every run from an input store satisfying the precondition, preservation along every
/// iteration of those runs, sufficiency at every exit and on every store of the domain.
/// Invariants without generalisation variables also get preservation on every domain store.
Verdict check_requirements(const Triple& t, const Stmt& loop, const Expr& invariant, const VarSet& genvars,
                           const Assignment& a, const Expr& post, const SolverConfig& cfg = {},
                           SolverStats* stats = nullptr);

/// Variables assigned in the body but absent from the putative invariant.
std::vector<std::string> diagnose_lost_variables(const Expr& putative, const Stmt& body);

/// All input stores of t (upward-exposed variables over 0..bound, others 0) satisfying t.pre.
std::vector<Store> input_stores(const Triple& t, std::uint64_t bound);

}  // namespace loopinv
