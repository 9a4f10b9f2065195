#pragma once

#include <optional>
#include <vector>

#include "loopinv/engine.hpp"
#include "loopinv/solver.hpp"
#include "loopinv/stmt.hpp"

namespace loopinv {

struct DriverConfig {
  EngineConfig engine;
  SolverConfig solver;
};

struct ProgramReport {
  /// The input with every processed loop carrying its putative invariant.
  Triple annotated;
  /// One entry per loop, innermost first.
  std::vector<InvariantReport> loops;
  /// Bounded check of the whole triple by execution; set by verify_program.
  std::optional<Verdict> triple;
};

/// Postcondition of `loop` inside t: its `{Q}` annotation, or for a loop of the top-level
/// sequence followed by loop-free code, the wlp of that code against t.post.
std::optional<Expr> loop_postcondition(const Triple& t, const Stmt& loop);

/// Discovers and solves an invariant for every loop, inner loops before outer ones.
ProgramReport annotate_program(const Triple& t, const DriverConfig& cfg = {});

/// Checks the programmer's invariants only; nothing is discovered.
ProgramReport verify_program(const Triple& t, const DriverConfig& cfg = {});

/// Runs t from every input store and checks t.post wherever the run finishes.
Verdict check_triple(const Triple& t, const SolverConfig& cfg = {});

}  // namespace loopinv
