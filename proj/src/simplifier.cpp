#include "loopinv/simplifier.hpp"

#include <algorithm>

#include "loopinv/wlp.hpp"

namespace loopinv {

const char* to_string(Rule r) {
  switch (r) {
    case Rule::R1: return "R1";
    case Rule::R2: return "R2";
    case Rule::R3: return "R3";
    case Rule::R4: return "R4";
    case Rule::R5: return "R5";
    case Rule::R6: return "R6";
  }
  return "?";
}

std::optional<Rule> parse_rule(std::string_view name) {
  for (Rule r : {Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6})
    if (name == to_string(r)) return r;
  return std::nullopt;
}

std::optional<Store> find_model(const std::vector<Expr>& facts, std::uint64_t bound) {
  VarSet names;
  for (const auto& f : facts) {
    auto fv = free_vars(f);
    names.insert(fv.begin(), fv.end());
  }
  const std::vector<std::string> slots(names.begin(), names.end());
  // Each fact is checked as soon as its last variable is assigned.
  std::vector<std::vector<CompiledExpr>> ready(slots.size() + 1);
  for (const auto& f : facts) {
    std::size_t last = 0;
    for (const auto& v : free_vars(f)) {
      last = std::max<std::size_t>(
          last, static_cast<std::size_t>(std::find(slots.begin(), slots.end(), v) - slots.begin()) + 1);
    }
    ready[last].push_back(CompiledExpr::compile(f, slots));
  }
  std::vector<std::uint64_t> values(slots.size(), 0);
  auto ok_at = [&](std::size_t level) {
    for (const auto& c : ready[level]) {
      std::uint64_t out = 0;
      if (!c.eval(values.data(), out, DivMode::Strict) || out == 0) return false;
    }
    return true;
  };
  if (!ok_at(0)) return std::nullopt;
  // Iterative backtracking over slots in name order.
  std::size_t depth = 0;
  if (slots.empty()) return Store{};
  values[0] = 0;
  for (;;) {
    if (ok_at(depth + 1)) {
      if (depth + 1 == slots.size()) {
        Store s;
        for (std::size_t i = 0; i < slots.size(); ++i) s[slots[i]] = values[i];
        return s;
      }
      ++depth;
      values[depth] = 0;
      continue;
    }
    while (values[depth] == bound) {
      if (depth == 0) return std::nullopt;
      --depth;
    }
    ++values[depth];
  }
}

namespace {

enum class Tag { Ctx, Ante, Body };

struct Fact {
  Expr e;
  Tag tag;
};

bool closed(const Expr& e) { return free_vars(e).empty(); }

class Simplifier {
 public:
  Simplifier(const SimpConfig& cfg, SimpResult& out) : cfg_(cfg), out_(out) {}

  Expr run(const Expr& context, const Expr& p) {
    for (const auto& c : top_conjuncts(normalise(context))) add(c, Tag::Ctx);
    const Expr q = normalise(p);
    if (q.is_op(OpKind::Implies) && cfg_.enabled(Rule::R5)) {
      const Expr& a = q.args()[0];
      const Expr& c = q.args()[1];
      for (const auto& x : top_conjuncts(a)) add(x, Tag::Ante);
      for (const auto& x : top_conjuncts(c)) add(x, Tag::Body);
      std::vector<Expr> all;
      for (const auto& f : facts_) all.push_back(f.e);
      const Expr path = conjoin(all);
      if (!find_model(all, cfg_.refutation_bound)) {
        log(Rule::R5, path, truth(false), Rewrite::Claim::Unsatisfiable);
        return truth(true);
      }
      log(Rule::R5, conjoin(context_facts()) && q, path, Rewrite::Claim::Strengthens);
    } else {
      for (const auto& x : top_conjuncts(q)) add(x, Tag::Body);
    }
    fact_rules();
    std::vector<Expr> kept;
    for (const auto& f : facts_) {
      if (f.tag == Tag::Ctx) continue;
      if (f.e.is_false()) return truth(false);
      if (!f.e.is_true()) kept.push_back(f.e);
    }
    return conjoin(kept);
  }

 private:
  std::vector<Expr> context_facts() const {
    std::vector<Expr> out;
    for (const auto& f : facts_)
      if (f.tag == Tag::Ctx) out.push_back(f.e);
    return out;
  }

  void add(const Expr& e, Tag tag) {
    for (const auto& x : top_conjuncts(e)) {
      if (x.is_true() && cfg_.enabled(Rule::R6)) continue;
      facts_.push_back({x, tag});
    }
  }

  bool spend() {
    if (steps_ >= cfg_.max_rewrite_steps) {
      out_.budget_exceeded = true;
      return false;
    }
    ++steps_;
    return true;
  }

  void log(Rule r, const Expr& before, const Expr& after, Rewrite::Claim claim = Rewrite::Claim::Equivalent) {
    out_.log.push_back({r, before, after, claim});
  }

  // Term rules, innermost first.
  Expr normalise(const Expr& e) {
    auto* o = e.as<node::Op>();
    if (o == nullptr) return e;
    std::vector<Expr> args;
    bool changed = false;
    for (const auto& a : o->args) {
      args.push_back(normalise(a));
      changed = changed || args.back() != a;
    }
    Expr cur = changed ? op(o->op, args) : e;
    for (;;) {
      auto next = rewrite_top(cur);
      if (!next) return cur;
      if (!spend()) return cur;
      log(next->first, cur, next->second);
      cur = normalise(next->second);
    }
  }

  std::optional<std::pair<Rule, Expr>> rewrite_top(const Expr& e) {
    auto* o = e.as<node::Op>();
    if (o == nullptr) return std::nullopt;
    if (o->op == OpKind::Not && cfg_.enabled(Rule::R1)) {
      const Expr& a = o->args[0];
      if (a.is_true()) return std::pair{Rule::R1, truth(false)};
      if (a.is_false()) return std::pair{Rule::R1, truth(true)};
      if (a.is_op(OpKind::Not)) return std::pair{Rule::R1, a.args()[0]};
      if (auto* r = a.as<node::Op>(); r != nullptr && is_relation(r->op)) {
        OpKind flipped{};
        switch (r->op) {
          case OpKind::Lt: flipped = OpKind::Ge; break;
          case OpKind::Gt: flipped = OpKind::Le; break;
          case OpKind::Le: flipped = OpKind::Gt; break;
          case OpKind::Ge: flipped = OpKind::Lt; break;
          case OpKind::Eq: flipped = OpKind::Ne; break;
          default: flipped = OpKind::Eq; break;
        }
        return std::pair{Rule::R1, op(flipped, r->args[0], r->args[1])};
      }
    }
    if (is_associative(o->op) && cfg_.enabled(Rule::R2) && o->args[0].is_op(o->op)) {
      const Expr& inner = o->args[0];
      return std::pair{Rule::R2, op(o->op, inner.args()[0], op(o->op, inner.args()[1], o->args[1]))};
    }
    if (cfg_.enabled(Rule::R6)) {
      if (o->op == OpKind::And) {
        if (o->args[0].is_true()) return std::pair{Rule::R6, o->args[1]};
        if (o->args[1].is_true()) return std::pair{Rule::R6, o->args[0]};
        if (o->args[0] == o->args[1]) return std::pair{Rule::R6, o->args[0]};
      }
      if (is_relation(o->op) && closed(e)) {
        auto r = eval_expr(e, {}, DivMode::Strict);
        if (auto* v = std::get_if<Value>(&r)) return std::pair{Rule::R6, truth(v->boolean)};
      }
      if (cfg_.fold_literals && is_arith(o->op) && closed(e)) {
        auto r = eval_expr(e, {}, DivMode::Strict);
        if (auto* v = std::get_if<Value>(&r)) return std::pair{Rule::R6, num(v->nat)};
      }
    }
    return std::nullopt;
  }

  // Fact-set rules to a fixed point.
  void fact_rules() {
    bool changed = true;
    while (changed && !out_.budget_exceeded) {
      changed = false;
      if (cfg_.enabled(Rule::R3)) changed = tighten_bounds() || changed;
      if (cfg_.enabled(Rule::R4)) changed = parity_division() || changed;
      if (cfg_.enabled(Rule::R6)) changed = dedupe() || changed;
    }
  }

  // a<b and a+1≥b give a+1=b.
  bool tighten_bounds() {
    for (auto& f : facts_) {
      if (f.tag == Tag::Ctx || !f.e.is_op(OpKind::Ge)) continue;
      const Expr& lhs = f.e.args()[0];
      const Expr& rhs = f.e.args()[1];
      if (!lhs.is_op(OpKind::Add) || lhs.args()[1] != num(1)) continue;
      const Expr strict = lt(lhs.args()[0], rhs);
      const Fact* bound = nullptr;
      for (const auto& g : facts_)
        if (g.e == strict) bound = &g;
      if (bound == nullptr || !spend()) continue;
      const Expr after = eq(lhs, rhs);
      log(Rule::R3, strict && f.e, strict && after);
      f.e = after;
      return true;
    }
    return false;
  }

  // Parity of t: 1 for t%2=1, 0 for t%2≠1 or t%2=0.
  static std::optional<std::pair<Expr, int>> parity(const Expr& e) {
    auto* o = e.as<node::Op>();
    if (o == nullptr || (o->op != OpKind::Eq && o->op != OpKind::Ne)) return std::nullopt;
    const Expr& lhs = o->args[0];
    if (!lhs.is_op(OpKind::Mod) || lhs.args()[1] != num(2)) return std::nullopt;
    const Expr& rhs = o->args[1];
    if (o->op == OpKind::Eq && rhs == num(1)) return std::pair{lhs.args()[0], 1};
    if (o->op == OpKind::Eq && rhs == num(0)) return std::pair{lhs.args()[0], 0};
    if (o->op == OpKind::Ne && rhs == num(1)) return std::pair{lhs.args()[0], 0};
    return std::nullopt;
  }

  // t%2=p with t/2=u gives t=(2*u)+p; with t/2≤0 gives t=p.
  bool parity_division() {
    for (std::size_t i = 0; i < facts_.size(); ++i) {
      auto par = parity(facts_[i].e);
      if (!par) continue;
      const auto& [t, bit] = *par;
      const Expr half = t / num(2);
      std::vector<Expr> before{facts_[i].e};
      std::vector<Expr> after;
      for (auto& g : facts_) {
        if (g.tag == Tag::Ctx) continue;
        std::optional<Expr> rewritten;
        if (g.e.is_op(OpKind::Eq) && g.e.args()[0] == half) {
          const Expr twice = num(2) * g.e.args()[1];
          rewritten = eq(t, bit == 1 ? twice + num(1) : twice);
        } else if (g.e.is_op(OpKind::Le) && g.e.args()[0] == half && g.e.args()[1] == num(0)) {
          rewritten = eq(t, num(static_cast<std::uint64_t>(bit)));
        }
        if (!rewritten || !spend()) continue;
        before.push_back(g.e);
        after.push_back(*rewritten);
        g.e = *rewritten;
      }
      if (after.empty()) continue;
      // The parity fact is implied by the rewritten ones, so it is consumed.
      if (facts_[i].tag == Tag::Ctx) after.insert(after.begin(), facts_[i].e);
      else facts_.erase(facts_.begin() + static_cast<std::ptrdiff_t>(i));
      log(Rule::R4, conjoin(before), conjoin(after));
      return true;
    }
    return false;
  }

  bool dedupe() {
    for (std::size_t i = 0; i < facts_.size(); ++i) {
      const Fact& f = facts_[i];
      if (f.tag == Tag::Ctx) continue;
      bool literal = false;
      if (f.e.is_true()) literal = true;
      if (auto* o = f.e.as<node::Op>(); o != nullptr && is_relation(o->op) && closed(f.e)) {
        auto r = eval_expr(f.e, {}, DivMode::Strict);
        if (auto* v = std::get_if<Value>(&r)) {
          if (!spend()) return false;
          log(Rule::R6, f.e, truth(v->boolean));
          facts_[i].e = truth(v->boolean);
          if (!v->boolean) return true;
          literal = true;
        }
      }
      if (literal) {
        facts_.erase(facts_.begin() + static_cast<std::ptrdiff_t>(i));
        return true;
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (facts_[j].e != f.e || !spend()) continue;
        log(Rule::R6, f.e && f.e, f.e);
        facts_.erase(facts_.begin() + static_cast<std::ptrdiff_t>(i));
        return true;
      }
    }
    return false;
  }

  const SimpConfig& cfg_;
  SimpResult& out_;
  std::vector<Fact> facts_;
  std::uint64_t steps_ = 0;
};

}  // namespace

SimpResult simplify_logged(const Expr& context, const Expr& p, const SimpConfig& cfg) {
  SimpResult out;
  Simplifier s(cfg, out);
  out.result = s.run(context, p);
  return out;
}

Expr simplify(const Expr& context, const Expr& p, const SimpConfig& cfg) {
  return simplify_logged(context, p, cfg).result;
}

}  // namespace loopinv
