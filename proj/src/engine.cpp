#include "loopinv/engine.hpp"

#include "loopinv/parser.hpp"

namespace loopinv {

const char* to_string(TraceStep::Kind k) {
  switch (k) {
    case TraceStep::Kind::Init: return "Init";
    case TraceStep::Kind::WLPStep: return "WLPStep";
    case TraceStep::Kind::GeneraliseStep: return "GeneraliseStep";
    case TraceStep::Kind::RenamingFound: return "RenamingFound";
    case TraceStep::Kind::Budget: return "Budget";
  }
  return "?";
}

const char* to_string(EngineFailure::Kind k) {
  switch (k) {
    case EngineFailure::Kind::IterationBudget: return "IterationBudget";
    case EngineFailure::Kind::AllBranchesTrue: return "AllBranchesTrue";
    case EngineFailure::Kind::NoPostcondition: return "NoPostcondition";
    case EngineFailure::Kind::Unannotated: return "Unannotated";
  }
  return "?";
}

namespace {

Expr simplify_step(const Expr& context, const Expr& p, const EngineConfig& cfg) {
  SimpResult r = simplify_logged(context, p, cfg.simp);
  if (cfg.on_simplify) cfg.on_simplify(context, p, r);
  return r.result;
}

}  // namespace

EngineResult find_invariant(const Stmt& loop, const Expr& post, const EngineConfig& cfg,
                            const VarSet& reserved) {
  auto* w = loop.as<stmt::While>();
  if (w == nullptr) throw std::invalid_argument("find_invariant needs a loop");
  VarSet avoid = reserved;
  for (const auto& v : program_vars(loop)) avoid.insert(v);
  for (const auto& v : free_vars(post)) avoid.insert(v);
  FreshSupply fresh(avoid);
  DerivationTrace trace;
  auto record = [&](TraceStep::Kind k, const Expr& f, std::string note, std::optional<Expr> partner,
                    std::uint64_t before) { trace.steps.push_back({k, f, std::move(note), std::move(partner), before}); };

  Expr p = simplify_step(truth(true), !w->cond && post, cfg);
  record(TraceStep::Kind::Init, p, "simplify(¬B ∧ Q)", std::nullopt, 0);
  std::vector<Expr> history;
  std::uint64_t iteration = 0;
  while (iteration < cfg.max_iterations) {
    ++iteration;
    const VarSet& genvars = fresh.issued();
    for (const auto& q : history) {
      if (renaming_of(p, q, genvars)) {
        record(TraceStep::Kind::RenamingFound, p, "renaming of " + pretty(q), q, fresh.counter());
        VarSet used;
        for (const auto& v : free_vars(p))
          if (genvars.count(v)) used.insert(v);
        return Discovery{p, used, trace, iteration};
      }
    }
    bool generalised = false;
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
      if (!coupled(*it, p)) continue;
      const std::uint64_t before = fresh.counter();
      FreshSupply trial = fresh;
      GenResult g = msg(p, *it, trial);
      // A generalisation that only renames p makes no progress.
      if (renaming_of(g.generalised, p, trial.issued())) continue;
      fresh = trial;
      p = g.generalised;
      record(TraceStep::Kind::GeneraliseStep, p, "msg with " + pretty(*it), *it, before);
      generalised = true;
      break;
    }
    if (generalised) continue;

    const std::uint64_t before = fresh.counter();
    Expr pre;
    try {
      pre = wlp(w->body, p, cfg.wlp_mode);
    } catch (const UnannotatedLoop& e) {
      return EngineFailure{EngineFailure::Kind::Unannotated, e.what(), trace, iteration};
    }
    std::vector<Expr> branches;
    for (const auto& path : expand_paths(pre)) {
      Expr s = simplify_step(w->cond, path.formula(), cfg);
      if (!s.is_true()) branches.push_back(s);
    }
    if (branches.empty()) {
      return EngineFailure{EngineFailure::Kind::AllBranchesTrue,
                           "every branch of WLP(S, " + pretty(p) + ") simplifies to True", trace, iteration};
    }
    history.push_back(p);
    p = msg_list(branches, fresh);
    record(TraceStep::Kind::WLPStep, p,
           std::to_string(branches.size()) + (branches.size() == 1 ? " branch" : " branches"), std::nullopt,
           before);
  }
  record(TraceStep::Kind::Budget, p, "iteration budget reached", std::nullopt, fresh.counter());
  return EngineFailure{EngineFailure::Kind::IterationBudget,
                       "no fixed point within " + std::to_string(cfg.max_iterations) + " iterations", trace,
                       iteration};
}

}  // namespace loopinv
