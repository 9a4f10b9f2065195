#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "loopinv/embed.hpp"
#include "loopinv/simplifier.hpp"
#include "loopinv/stmt.hpp"
#include "loopinv/wlp.hpp"

namespace loopinv {

struct TraceStep {
  enum class Kind { Init, WLPStep, GeneraliseStep, RenamingFound, Budget };
  Kind kind;
  Expr formula;
  std::string note;
  /// For GeneraliseStep and RenamingFound: the history member involved.
  std::optional<Expr> partner;
  /// Fresh-name counter before the step, so replays can reproduce names.
  std::uint64_t fresh_before = 0;
};

const char* to_string(TraceStep::Kind k);

struct DerivationTrace {
  std::vector<TraceStep> steps;
};

struct EngineConfig {
  std::uint64_t max_iterations = 64;
  SimpConfig simp;
  WlpLoopMode wlp_mode = WlpLoopMode::Invariant;
  /// Sees every simplifier call with its rewrite log.
  std::function<void(const Expr& context, const Expr& p, const SimpResult& r)> on_simplify;
};

struct Discovery {
  Expr putative;
  VarSet genvars;
  DerivationTrace trace;
  std::uint64_t iterations = 0;
};

struct EngineFailure {
  enum class Kind { IterationBudget, AllBranchesTrue, NoPostcondition, Unannotated };
  Kind kind;
  std::string message;
  DerivationTrace trace;
  std::uint64_t iterations = 0;
};

const char* to_string(EngineFailure::Kind k);

using EngineResult = std::variant<Discovery, EngineFailure>;

/// Backward iteration from simplify(¬B ∧ post): stop on a renaming of a history member,
/// generalise against the most recent coupled member, otherwise step back through the body.
/// `reserved` names (program variables) are never used as generalisation variables.
EngineResult find_invariant(const Stmt& loop, const Expr& post, const EngineConfig& cfg,
                            const VarSet& reserved = {});

}  // namespace loopinv
