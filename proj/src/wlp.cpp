#include "loopinv/wlp.hpp"

#include <string>

namespace loopinv {

UnannotatedLoop::UnannotatedLoop(SourceLoc l)
    : std::runtime_error("loop at " + std::to_string(l.line) + ":" + std::to_string(l.column) +
                         " has no invariant annotation"),
      loc(l) {}

namespace {

// Assignments v:=e for the equalities v=e of the loop's postcondition that name a loop variable.
std::optional<Stmt> substitute_row(const stmt::While& w) {
  if (!w.post) return std::nullopt;
  const VarSet assigned = assigned_vars(w.body);
  std::vector<Stmt> parts;
  for (const auto& c : top_conjuncts(*w.post)) {
    if (!c.is_op(OpKind::Eq)) continue;
    const Expr& lhs = c.args()[0];
    auto* v = lhs.as<node::Var>();
    if (v == nullptr || !assigned.count(v->name) || occurs_free(v->name, c.args()[1])) continue;
    parts.push_back(assign(v->name, c.args()[1]));
  }
  if (parts.empty()) return std::nullopt;
  return seq(parts);
}

}  // namespace

Expr wlp(const Stmt& st, const Expr& q, WlpLoopMode mode) {
  return std::visit(
      [&](const auto& x) -> Expr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, stmt::Skip>) {
          return q;
        } else if constexpr (std::is_same_v<T, stmt::Assign>) {
          return substitute(q, {{x.target, x.rhs}});
        } else if constexpr (std::is_same_v<T, stmt::Seq>) {
          return wlp(x.first, wlp(x.second, q, mode), mode);
        } else if constexpr (std::is_same_v<T, stmt::If>) {
          return implies(x.cond, wlp(x.then_branch, q, mode)) &&
                 implies(!x.cond, wlp(x.else_branch, q, mode));
        } else if constexpr (std::is_same_v<T, stmt::Block>) {
          return wlp(x.body, q, mode);
        } else {
          if (mode == WlpLoopMode::Substitute) {
            if (auto row = substitute_row(x)) return wlp(*row, q, mode);
          }
          if (!x.invariant) throw UnannotatedLoop(x.loc);
          const Expr& inv = *x.invariant;
          return inv && (implies(x.cond && inv, wlp(x.body, inv, mode)) && implies(!x.cond && inv, q));
        }
      },
      st.node());
}

std::vector<Expr> top_conjuncts(const Expr& p) {
  if (!p.is_op(OpKind::And)) return {p};
  auto out = top_conjuncts(p.args()[0]);
  auto rest = top_conjuncts(p.args()[1]);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

Expr WlpPath::formula() const {
  if (antecedents.empty()) return conjoin(body);
  return implies(conjoin(antecedents), conjoin(body));
}

std::vector<WlpPath> expand_paths(const Expr& p) {
  std::vector<Expr> shared;
  std::vector<Expr> alternatives;
  for (const auto& c : top_conjuncts(p)) (c.is_op(OpKind::Implies) ? alternatives : shared).push_back(c);
  if (alternatives.empty()) return {WlpPath{{}, shared}};
  std::vector<WlpPath> out;
  for (const auto& imp : alternatives) {
    for (auto sub : expand_paths(imp.args()[1])) {
      WlpPath path;
      path.antecedents.push_back(imp.args()[0]);
      path.antecedents.insert(path.antecedents.end(), sub.antecedents.begin(), sub.antecedents.end());
      path.body = shared;
      path.body.insert(path.body.end(), sub.body.begin(), sub.body.end());
      out.push_back(std::move(path));
    }
  }
  return out;
}

VCSet vcs_for_loop(const Expr& pre_ctx, const Stmt& loop, const Expr& post, WlpLoopMode mode) {
  auto* w = loop.as<stmt::While>();
  if (w == nullptr || !w->invariant) throw UnannotatedLoop(w ? w->loc : SourceLoc{});
  const Expr& inv = *w->invariant;
  return {implies(pre_ctx, inv), implies(inv && w->cond, wlp(w->body, inv, mode)),
          implies(inv && !w->cond, post)};
}

Expr entry_context(const Expr& pre, const std::vector<Stmt>& prefix) {
  std::vector<Expr> facts = top_conjuncts(pre);
  auto drop = [&](const VarSet& vs) {
    std::vector<Expr> kept;
    for (const auto& f : facts) {
      bool hit = false;
      for (const auto& v : vs) hit = hit || occurs_free(v, f);
      if (!hit) kept.push_back(f);
    }
    facts = std::move(kept);
  };
  for (const auto& st : prefix) {
    if (auto* a = st.as<stmt::Assign>()) {
      drop({a->target});
      if (!occurs_free(a->target, a->rhs)) facts.push_back(eq(var(a->target), a->rhs));
    } else if (st.is<stmt::Seq>()) {
      facts = top_conjuncts(entry_context(conjoin(facts), flatten_seq(st)));
    } else {
      drop(assigned_vars(st));
    }
  }
  std::vector<Expr> kept;
  for (const auto& f : facts)
    if (!f.is_true()) kept.push_back(f);
  return conjoin(kept);
}

}  // namespace loopinv
