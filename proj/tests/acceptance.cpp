// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "loopinv/driver.hpp"
#include "loopinv/report.hpp"
#include "support.hpp"

using namespace loopinv;
using Kind = TraceStep::Kind;
using Status = Verdict::Status;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream why;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      why << what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_modulo_genvars(const Expr& got, const Expr& want, const VarSet& program_vars) {
  VarSet renameable;
  for (const auto& v : free_vars(got))
    if (!program_vars.count(v)) renameable.insert(v);
  for (const auto& v : free_vars(want))
    if (!program_vars.count(v)) renameable.insert(v);
  return renaming_of(got, want, renameable).has_value();
}

void match_trace(Outcome& o, const DerivationTrace& trace, const std::vector<std::pair<Kind, const char*>>& golden,
                 const VarSet& program_vars) {
  if (trace.steps.size() != golden.size()) {
    o.require(false, "trace has " + std::to_string(trace.steps.size()) + " steps, expected " +
                         std::to_string(golden.size()));
    return;
  }
  for (std::size_t i = 0; i < golden.size(); ++i) {
    const auto& s = trace.steps[i];
    o.require(s.kind == golden[i].first && same_modulo_genvars(s.formula, parse_expr(golden[i].second), program_vars),
              "step " + std::to_string(i + 1) + " is " + pretty(s.formula) + ", expected " + golden[i].second);
  }
}

std::optional<std::uint64_t> value(const Expr& e, const Store& s) {
  auto r = eval_expr(e, s, DivMode::Total);
  if (!std::holds_alternative<Value>(r)) return std::nullopt;
  return std::get<Value>(r).nat;
}

// Same values, after renaming, on every store of `names` over 0..bound.
void match_assignment(Outcome& o, const InvariantReport& r, const Expr& want_inv, const Assignment& want,
                      const std::vector<std::string>& names, std::uint64_t bound) {
  if (!r.assignment) {
    o.require(false, "no assignment");
    return;
  }
  VarSet renameable = r.genvars;
  for (const auto& [g, e] : want.initial) renameable.insert(g);
  const auto rho = renaming_of(r.invariant, want_inv, renameable);
  if (!rho) {
    o.require(false, "invariant " + pretty(r.invariant) + " is not a renaming of " + pretty(want_inv));
    return;
  }
  support::for_each_store(names, bound, [&](const Store& s) {
    Store mine = s;
    for (const auto& [p, ours] : *rho) mine[ours] = s.at(p);
    for (const auto& [p, ours] : *rho) {
      const auto check = [&](const Subst& a, const Subst& b, const char* stage) {
        const bool ok = value(a.at(ours), mine) == value(b.at(p), s);
        o.require(ok, std::string(stage) + " value of " + ours + " differs from " + pretty(b.at(p)) + " on " +
                          format_store(s));
        return ok;
      };
      if (!check(r.assignment->initial, want.initial, "initial") || !check(r.assignment->step, want.step, "step") ||
          !check(r.assignment->final, want.final, "final"))
        return false;
    }
    return true;
  });
}

Assignment counting_assignment() {
  const Expr n = var("n"), k = var("k"), p = var("p"), q = var("q");
  Assignment a;
  a.initial = {{"p", n}, {"q", k ^ n}};
  a.step = {{"p", p - num(1)}, {"q", q / k}};
  a.final = {{"p", num(0)}, {"q", num(1)}};
  return a;
}

const std::vector<std::pair<Kind, const char*>> counting_trace = {
    {Kind::Init, "x>=n /\\ y=k^n"},
    {Kind::WLPStep, "x+1=n /\\ y*k=k^n"},
    {Kind::WLPStep, "x+(1+1)=n /\\ y*(k*k)=k^n"},
    {Kind::GeneraliseStep, "x+p=n /\\ y*q=k^n"},
    {Kind::WLPStep, "x+(1+p)=n /\\ y*(k*q)=k^n"},
    {Kind::GeneraliseStep, "x+p1=n /\\ y*q1=k^n"},
    {Kind::RenamingFound, "x+p1=n /\\ y*q1=k^n"}};

const InvariantReport* loop_at(const ProgramReport& r, int line) {
  for (const auto& l : r.loops)
    if (l.location.line == line) return &l;
  return nullptr;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Triple t = support::load("exp_simple.imp");
  const ProgramReport r = annotate_program(t);
  const double secs = seconds_since(t0);
  if (r.loops.size() != 1 || !r.loops[0].trace) {
    o.require(false, "expected one traced loop");
    return o;
  }
  const InvariantReport& l = r.loops[0];
  match_trace(o, *l.trace, counting_trace, program_vars(t));
  match_assignment(o, l, parse_expr("x+p=n /\\ y*q=k^n"), counting_assignment(), {"n", "k", "p", "q"}, 6);
  o.require(l.verdict.status == Status::VerifiedUpToBound, std::string("verdict ") + to_string(l.verdict.status));
  o.require(secs < 10, "took " + std::to_string(secs) + " s");
  o.why << (o.pass ? "trace and assignment match, verified up to bound 6 in " + std::to_string(secs) + " s"
                   : "");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Triple t = support::load("exp_binary.imp");
  const ProgramReport r = annotate_program(t);
  const double secs = seconds_since(t0);
  if (r.loops.size() != 1 || !r.loops[0].trace) {
    o.require(false, "expected one traced loop");
    return o;
  }
  const InvariantReport& l = r.loops[0];
  match_trace(o, *l.trace,
              {{Kind::Init, "x<=0 /\\ y=k^n"},
               {Kind::WLPStep, "x=1 /\\ y*z=k^n"},
               {Kind::WLPStep, "x=v /\\ y*(z*w)=k^n"},
               {Kind::WLPStep, "x=v1 /\\ y*(z*(z*w1))=k^n"},
               {Kind::GeneraliseStep, "x=v2 /\\ y*(z*w2)=k^n"},
               {Kind::RenamingFound, "x=v2 /\\ y*(z*w2)=k^n"}},
              program_vars(t));
  // the even branch of the first backward step collapses to True
  auto* w = support::first_loop(t).as<stmt::While>();
  const auto paths = expand_paths(wlp(w->body, l.trace->steps[0].formula));
  int collapsed = 0;
  for (const auto& p : paths) collapsed += simplify(w->cond, p.formula()).is_true();
  o.require(paths.size() == 2 && collapsed == 1, "expected one of two branches to collapse at iteration 1");
  o.require(l.verdict.status == Status::VerifiedUpToBound && l.assignment && l.assignment->step_condition,
            std::string("solver: ") + to_string(l.verdict.status) + " at requirement " +
                std::to_string(l.verdict.requirement) + " (" + l.verdict.note + ")");
  o.require(secs < 30, "took " + std::to_string(secs) + " s");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const Triple t = support::load("exp_nested.imp");
  DriverConfig cfg;
  cfg.engine.wlp_mode = WlpLoopMode::Substitute;
  const ProgramReport r = annotate_program(t, cfg);
  const InvariantReport* inner = loop_at(r, 10);
  const InvariantReport* outer = loop_at(r, 5);
  if (!inner || !outer || !inner->trace || !outer->trace) {
    o.require(false, "expected traced inner and outer loops");
    return o;
  }
  match_trace(o, *inner->trace,
              {{Kind::Init, "z>=k /\\ v=y*k"},
               {Kind::WLPStep, "z+1=k /\\ v+y=y*k"},
               {Kind::WLPStep, "z+(1+1)=k /\\ v+(y+y)=y*k"},
               {Kind::GeneraliseStep, "z+w=k /\\ v+u=y*k"},
               {Kind::WLPStep, "z+(1+w)=k /\\ v+(y+u)=y*k"},
               {Kind::GeneraliseStep, "z+w1=k /\\ v+u1=y*k"},
               {Kind::RenamingFound, "z+w1=k /\\ v+u1=y*k"}},
              program_vars(t));
  const Expr k = var("k"), y = var("y"), w = var("w"), u = var("u");
  Assignment want;
  want.initial = {{"w", k}, {"u", y * k}};
  want.step = {{"w", w - num(1)}, {"u", u - y}};
  want.final = {{"w", num(0)}, {"u", num(0)}};
  match_assignment(o, *inner, parse_expr("z+w=k /\\ v+u=y*k"), want, {"k", "y", "w", "u"}, 6);
  o.require(inner->verdict.status == Status::VerifiedUpToBound,
            std::string("inner verdict ") + to_string(inner->verdict.status));
  match_trace(o, *outer->trace, counting_trace, program_vars(t));
  match_assignment(o, *outer, parse_expr("x+p=n /\\ y*q=k^n"), counting_assignment(), {"n", "k", "p", "q"}, 6);
  o.require(outer->verdict.status == Status::VerifiedUpToBound,
            std::string("outer verdict ") + to_string(outer->verdict.status));
  return o;
}

Outcome criterion4() {
  Outcome o;
  const Triple t = support::load("exp_swapped.imp");
  const ProgramReport r = annotate_program(t);
  if (r.loops.size() != 1) {
    o.require(false, "expected one loop");
    return o;
  }
  const InvariantReport& l = r.loops[0];
  o.require(same_modulo_genvars(l.invariant, parse_expr("x+v=n /\\ k*w=k^n"), program_vars(t)),
            "putative invariant " + pretty(l.invariant));
  o.require(l.lost_variables == std::vector<std::string>{"y"}, "lost variables differ from [y]");
  o.require(l.verdict.status == Status::NoCandidate, std::string("verdict ") + to_string(l.verdict.status));
  o.require(exit_code(r, Mode::Discover) == 2, "exit code " + std::to_string(exit_code(r, Mode::Discover)));
  return o;
}

Outcome criterion5() {
  Outcome o;
  support::Rng rng(500);
  int failures = 0, extra_vars = 0;
  for (int i = 0; i < 1000; ++i) {
    const Expr a = support::random_term(rng, 5);
    const Expr b = support::random_term(rng, 5);
    FreshSupply fresh({"a", "b", "c"});
    const GenResult g = msg(a, b, fresh);
    failures += substitute(g.generalised, g.theta_left) != a || substitute(g.generalised, g.theta_right) != b;
    FreshSupply f2({"a", "b", "c"});
    const GenResult same = msg(a, a, f2);
    extra_vars += !same.theta_left.empty() || same.generalised != a;
  }
  o.require(failures == 0, std::to_string(failures) + " pairs not reproduced");
  o.require(extra_vars == 0, std::to_string(extra_vars) + " self-generalisations introduced variables");
  return o;
}

Outcome criterion6() {
  Outcome o;
  support::Rng rng(600);
  int not_reflexive = 0, coupled_across = 0, distinct = 0;
  for (int i = 0; i < 1000; ++i) {
    const Expr a = support::random_term(rng, 5);
    not_reflexive += !embeds(a, a);
    const Expr b = support::random_term(rng, 5);
    auto* oa = a.as<node::Op>();
    auto* ob = b.as<node::Op>();
    if (oa && ob && oa->op != ob->op) {
      ++distinct;
      coupled_across += coupled(a, b);
    }
  }
  const Expr x = var("x"), y = var("y"), n = var("n"), k = var("k");
  const Expr one_step = eq(x + num(1), n) && eq(y * k, k ^ n);
  const Expr two_steps = eq(x + (num(1) + num(1)), n) && eq(y * (k * k), k ^ n);
  o.require(not_reflexive == 0, std::to_string(not_reflexive) + " terms do not embed in themselves");
  o.require(coupled(one_step, two_steps), "the one- and two-step approximations are not coupled");
  o.require(distinct > 100 && coupled_across == 0, std::to_string(coupled_across) + " of " + std::to_string(distinct) +
                                                       " pairs with distinct top functors coupled");
  return o;
}

Outcome criterion7() {
  Outcome o;
  support::Rng rng(700);
  const std::vector<std::string> vars = {"x", "y", "n"};
  std::uint64_t violations = 0, checked = 0;
  for (int i = 0; i < 200; ++i) {
    const Stmt s = support::random_loop_free(rng, 4, vars);
    const Expr q = support::random_bool(rng, 2, vars);
    const Expr p = wlp(s, q);
    support::for_each_store(vars, 8, [&](const Store& st) {
      bool err = false;
      if (!holds(p, st, &err) || err) return true;
      const auto out = exec(s, st, 10);
      if (out.kind != ExecOutcome::Kind::Finished) return true;
      ++checked;
      bool e2 = false;
      if (!holds(q, out.store, &e2) || e2) ++violations;
      return true;
    });
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.require(checked > 0, "no store satisfied any wlp");
  if (o.pass) o.why << checked << " store checks";
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::vector<Rewrite> rewrites;
  auto collect = [&](const Expr&, const Expr&, const SimpResult& r) {
    rewrites.insert(rewrites.end(), r.log.begin(), r.log.end());
  };
  for (const char* f : {"exp_simple.imp", "exp_binary.imp", "exp_nested.imp", "exp_swapped.imp", "exp_annotated.imp"}) {
    const Triple t = support::load(f);
    for (const WlpLoopMode mode : {WlpLoopMode::Invariant, WlpLoopMode::Substitute}) {
      EngineConfig cfg;
      cfg.wlp_mode = mode;
      cfg.on_simplify = collect;
      for (const Stmt& loop : loops_innermost_first(t.program)) {
        const auto post = loop_postcondition(t, loop);
        if (post) find_invariant(loop, *post, cfg, program_vars(t));
      }
    }
  }
  std::uint64_t bad = 0, errors = 0, stores = 0;
  for (const auto& r : rewrites) {
    const auto c = support::check_claim(r, 5);
    bad += !c.ok;
    errors += c.error_stores;
    stores += c.stores;
  }
  o.require(!rewrites.empty(), "no rewrites fired");
  o.require(bad == 0, std::to_string(bad) + " unsound rewrites");
  if (o.pass)
    o.why << rewrites.size() << " rewrites, " << stores << " stores, " << errors << " EvalError stores excluded";
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::vector<Triple> programs;
  for (const char* f : {"exp_simple.imp", "exp_binary.imp", "exp_nested.imp", "exp_swapped.imp", "exp_annotated.imp"})
    programs.push_back(support::load(f));
  support::Rng rng(900);
  const std::vector<std::string> posts = {"x >= n", "y >= x", "x + y >= n", "y = x + n", "x <= n + 3", "y >= 0"};
  for (int i = 0; i < 100; ++i) {
    const auto c = std::to_string(1 + support::pick(rng, 3));
    const auto d = std::to_string(support::pick(rng, 4));
    const std::string update = support::choose(rng, std::vector<std::string>{"y+" + d, "y+x", "x+" + d, "y-1", d});
    programs.push_back(parse_program("{n >= 0} x := 0; y := " + d + "; WHILE x < n DO BEGIN x := x+" + c +
                                     "; y := " + update + " END {" + support::choose(rng, posts) + "}"));
  }
  int budget_hits = 0;
  for (const auto& t : programs) {
    for (const Stmt& loop : loops_innermost_first(t.program)) {
      const auto post = loop_postcondition(t, loop);
      if (!post) continue;
      EngineConfig cfg;
      cfg.max_iterations = 64;
      const auto r = find_invariant(loop, *post, cfg, program_vars(t));
      if (auto* f = std::get_if<EngineFailure>(&r)) budget_hits += f->kind == EngineFailure::Kind::IterationBudget;
    }
  }
  o.require(budget_hits == 0, std::to_string(budget_hits) + " runs hit the iteration budget");
  if (o.pass) o.why << programs.size() << " programs";
  return o;
}

Outcome criterion10() {
  Outcome o;
  const Triple t = support::load("exp_annotated.imp");
  const auto parts = flatten_seq(t.program);
  const Stmt loop = parts[2];
  const Expr ctx = entry_context(t.pre, {parts[0], parts[1]});
  const VCSet vc = vcs_for_loop(ctx, loop, t.post);
  std::uint64_t failures = 0, errors = 0;
  // y ranges over small values and over k^x, the only value the invariant accepts beyond them
  support::for_each_store({"n", "k", "x", "y"}, 6, [&](const Store& s0) {
    for (int pass = 0; pass < 2; ++pass) {
      Store s = s0;
      if (pass == 1) s["y"] = *value(var("k") ^ var("x"), s0);
      for (const Expr& c : {vc.establishment, vc.preservation, vc.sufficiency}) {
        bool err = false;
        if (!holds(c, s, &err)) ++failures;
        errors += err;
      }
    }
    return true;
  });
  const ProgramReport r = verify_program(t);
  const bool solver_ok = r.loops.size() == 1 && r.loops[0].verdict.status == Status::VerifiedUpToBound;
  o.require(failures == 0, std::to_string(failures) + " VC failures");
  o.require(solver_ok, "solver verdict disagrees");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"counting exponentiation trace, assignment and runtime", criterion1},
      {"binary exponentiation trace and conditional step", criterion2},
      {"nested loops with the inner postcondition supplied", criterion3},
      {"operand-swapped program loses y", criterion4},
      {"msg laws on random pairs", criterion5},
      {"embedding laws", criterion6},
      {"wlp soundness on random loop-free programs", criterion7},
      {"simplifier rewrites preserve meaning", criterion8},
      {"engine terminates within the budget", criterion9},
      {"verification conditions agree with the solver", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.why << "exception: " << e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
    const std::string why = o.why.str();
    if (!why.empty()) std::cout << " (" << why << ")";
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
