#include "loopinv/driver.hpp"

#include "loopinv/wlp.hpp"

namespace loopinv {

namespace {

// Statements of the top-level sequence, looking through blocks.
void top_level(const Stmt& s, std::vector<Stmt>& out) {
  for (const auto& part : flatten_seq(s)) {
    if (auto* b = part.as<stmt::Block>())
      top_level(b->body, out);
    else
      out.push_back(part);
  }
}

const Stmt* find_loop(const std::vector<Stmt>& loops, std::size_t i) {
  return i < loops.size() ? &loops[i] : nullptr;
}

}  // namespace

std::optional<Expr> loop_postcondition(const Triple& t, const Stmt& loop) {
  auto* w = loop.as<stmt::While>();
  if (w == nullptr) return std::nullopt;
  if (w->post) return w->post;
  std::vector<Stmt> parts;
  top_level(t.program, parts);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].id() != loop.id()) continue;
    const Stmt rest = seq(std::vector<Stmt>(parts.begin() + static_cast<std::ptrdiff_t>(i) + 1, parts.end()));
    if (!is_loop_free(rest)) return std::nullopt;
    return wlp(rest, t.post);
  }
  return std::nullopt;
}

ProgramReport annotate_program(const Triple& t, const DriverConfig& cfg) {
  ProgramReport report;
  report.annotated = t;
  const std::size_t count = loops_innermost_first(t.program).size();
  VarSet used_genvars;
  for (std::size_t i = 0; i < count; ++i) {
    Triple& cur = report.annotated;
    const Stmt loop = *find_loop(loops_innermost_first(cur.program), i);
    auto* w = loop.as<stmt::While>();
    InvariantReport r;
    r.location = w->loc;

    const auto post = loop_postcondition(cur, loop);
    if (!post) {
      r.engine_failure = EngineFailure::Kind::NoPostcondition;
      r.verdict.note = "no postcondition: annotate the loop with {Q} after it";
      report.loops.push_back(std::move(r));
      continue;
    }
    VarSet reserved = program_vars(cur);
    reserved.insert(used_genvars.begin(), used_genvars.end());
    EngineResult found = find_invariant(loop, *post, cfg.engine, reserved);
    if (auto* f = std::get_if<EngineFailure>(&found)) {
      r.post = *post;
      r.engine_failure = f->kind;
      r.verdict.note = f->message;
      r.trace = f->trace;
      if (!f->trace.steps.empty()) {
        r.invariant = f->trace.steps.back().formula;
        r.lost_variables = diagnose_lost_variables(r.invariant, w->body);
      }
      report.loops.push_back(std::move(r));
      continue;
    }
    auto& d = std::get<Discovery>(found);
    r = solve(cur, loop, d.putative, d.genvars, *post, cfg.solver);
    r.trace = d.trace;
    used_genvars.insert(d.genvars.begin(), d.genvars.end());
    const Stmt annotated = while_loop(w->cond, w->body, d.putative, w->post, w->loc);
    cur.program = replace_loop(cur.program, loop.id(), annotated);
    report.loops.push_back(std::move(r));
  }
  return report;
}

ProgramReport verify_program(const Triple& t, const DriverConfig& cfg) {
  ProgramReport report;
  report.annotated = t;
  for (const auto& loop : loops_innermost_first(t.program)) {
    auto* w = loop.as<stmt::While>();
    InvariantReport r;
    r.location = w->loc;
    if (!w->invariant) {
      r.engine_failure = EngineFailure::Kind::Unannotated;
      r.verdict.note = "loop has no invariant";
      report.loops.push_back(std::move(r));
      continue;
    }
    r.invariant = *w->invariant;
    const auto post = loop_postcondition(t, loop);
    if (!post) {
      r.engine_failure = EngineFailure::Kind::NoPostcondition;
      r.verdict.note = "no postcondition: annotate the loop with {Q} after it";
      report.loops.push_back(std::move(r));
      continue;
    }
    r.post = *post;
    r.assignment = Assignment{};
    r.verdict = check_requirements(t, loop, *w->invariant, {}, Assignment{}, *post, cfg.solver, &r.stats);
    report.loops.push_back(std::move(r));
  }
  report.triple = check_triple(t, cfg.solver);
  return report;
}

Verdict check_triple(const Triple& t, const SolverConfig& cfg) {
  Verdict v;
  for (const auto& input : input_stores(t, cfg.domain_bound)) {
    const auto out = exec(t.program, input, cfg.fuel);
    if (out.kind != ExecOutcome::Kind::Finished) continue;
    bool errored = false;
    if (!holds(t.post, out.store, &errored) && !errored) {
      v.status = Verdict::Status::Failed;
      v.counterexample = input;
      v.note = "postcondition fails after running the program";
      return v;
    }
  }
  v.status = Verdict::Status::VerifiedUpToBound;
  return v;
}

}  // namespace loopinv
