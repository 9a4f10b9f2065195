#include "loopinv/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "loopinv/wlp.hpp"

namespace loopinv {

const char* to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::VerifiedUpToBound: return "VerifiedUpToBound";
    case Verdict::Status::Failed: return "Failed";
    case Verdict::Status::NoCandidate: return "NoCandidate";
    case Verdict::Status::NotSolved: return "NotSolved";
  }
  return "?";
}

std::vector<std::string> diagnose_lost_variables(const Expr& putative, const Stmt& body) {
  std::vector<std::string> out;
  for (const auto& v : assigned_vars(body))
    if (!occurs_free(v, putative)) out.push_back(v);
  return out;
}

namespace {

// Calls f on every store assigning each name a value in 0..bound; stops when f returns false.
bool for_each_store(const std::vector<std::string>& names, std::uint64_t bound, Store base,
                    const std::function<bool(const Store&)>& f) {
  std::vector<std::uint64_t> digits(names.size(), 0);
  for (;;) {
    for (std::size_t i = 0; i < names.size(); ++i) base[names[i]] = digits[i];
    if (!f(base)) return false;
    std::size_t i = names.size();
    for (;;) {
      if (i == 0) return true;
      --i;
      if (digits[i] < bound) {
        ++digits[i];
        break;
      }
      digits[i] = 0;
    }
  }
}

struct Run {
  std::vector<Store> heads;
  bool exited = false;
};

std::vector<Run> trajectories(const Triple& t, const Stmt& loop, const SolverConfig& cfg) {
  auto* w = loop.as<stmt::While>();
  std::vector<Run> runs;
  for (const auto& input : input_stores(t, cfg.domain_bound)) {
    const std::size_t first = runs.size();
    exec(t.program, input, cfg.fuel, [&](const Stmt& l, const Store& s, bool arrival) {
      if (l.id() != loop.id()) return;
      if (arrival) runs.emplace_back();
      runs.back().heads.push_back(s);
    });
    for (std::size_t i = first; i < runs.size(); ++i) {
      bool errored = false;
      const bool b = holds(w->cond, runs[i].heads.back(), &errored);
      runs[i].exited = !b && !errored;
    }
  }
  return runs;
}

// Values of the generalisation variables given by `exprs` at store s.
bool eval_all(const Subst& exprs, const Store& s, DivMode mode, Store& out) {
  for (const auto& [g, e] : exprs) {
    auto r = eval_expr(e, s, mode);
    auto* v = std::get_if<Value>(&r);
    if (v == nullptr) return false;
    out[g] = v->nat;
  }
  return true;
}

std::optional<Expr> step_condition(const Stmt& body) {
  const Stmt* cur = &body;
  while (auto* b = cur->as<stmt::Block>()) cur = &b->body;
  for (const auto& s : flatten_seq(*cur))
    if (auto* i = s.as<stmt::If>()) return i->cond;
  return std::nullopt;
}

// Depth-bounded expression templates over literals and slots, in size-then-lexicographic order.
class TemplateSpace {
 public:
  struct Leaf {
    bool literal;
    std::uint64_t value;  // literal value or slot index
    std::string name;
  };

  TemplateSpace(std::vector<Leaf> leaves, const SolverConfig& cfg)
      : leaves_(std::move(leaves)), ops_(cfg.operator_pool), literals_(cfg.literal_pool) {
    for (std::uint32_t i = 0; i < leaves_.size(); ++i) pool_.push_back({-1, i, 0});
    const std::uint32_t nleaves = static_cast<std::uint32_t>(pool_.size());
    if (cfg.template_depth >= 1) {
      for (std::size_t o = 0; o < ops_.size(); ++o)
        for (std::uint32_t a = 0; a < nleaves; ++a)
          for (std::uint32_t b = 0; b < nleaves; ++b) add(o, a, b);
    }
    const std::uint32_t end1 = static_cast<std::uint32_t>(pool_.size());
    if (cfg.template_depth >= 2) {
      for (std::size_t o = 0; o < ops_.size(); ++o) {
        for (std::uint32_t a = 0; a < nleaves; ++a)
          for (std::uint32_t b = nleaves; b < end1; ++b) add(o, a, b);
        for (std::uint32_t a = nleaves; a < end1; ++a)
          for (std::uint32_t b = 0; b < nleaves; ++b) add(o, a, b);
      }
      for (std::size_t o = 0; o < ops_.size(); ++o)
        for (std::uint32_t a = nleaves; a < end1; ++a)
          for (std::uint32_t b = nleaves; b < end1; ++b) add(o, a, b);
    }
  }

  std::size_t size() const { return pool_.size(); }

  bool eval(std::uint32_t n, const std::uint64_t* slots, DivMode mode, std::uint64_t& out) const {
    const Node& t = pool_[n];
    if (t.op < 0) {
      const Leaf& l = leaves_[t.a];
      out = l.literal ? l.value : slots[l.value];
      return true;
    }
    std::uint64_t a = 0, b = 0;
    if (!eval(t.a, slots, mode, a) || !eval(t.b, slots, mode, b)) return false;
    EvalErrorKind err{};
    return apply_arith(ops_[static_cast<std::size_t>(t.op)], a, b, mode, out, err);
  }

  Expr to_expr(std::uint32_t n) const {
    const Node& t = pool_[n];
    if (t.op < 0) {
      const Leaf& l = leaves_[t.a];
      return l.literal ? num(l.value) : var(l.name);
    }
    return op(ops_[static_cast<std::size_t>(t.op)], to_expr(t.a), to_expr(t.b));
  }

 private:
  struct Node {
    int op;
    std::uint32_t a;
    std::uint32_t b;
  };

  const Leaf* literal(std::uint32_t n) const {
    const Node& t = pool_[n];
    if (t.op >= 0 || !leaves_[t.a].literal) return nullptr;
    return &leaves_[t.a];
  }

  // Skips templates that are equal to an earlier one on every store.
  void add(std::size_t o, std::uint32_t a, std::uint32_t b) {
    const OpKind k = ops_[o];
    const Leaf* la = literal(a);
    const Leaf* lb = literal(b);
    if ((la && la->value == 0) || (lb && lb->value == 0)) return;
    if (lb && lb->value == 1 && (k == OpKind::Mul || k == OpKind::Div || k == OpKind::Pow || k == OpKind::Mod))
      return;
    if (la && la->value == 1 && (k == OpKind::Mul || k == OpKind::Pow)) return;
    if (a == b && (k == OpKind::Sub || k == OpKind::Mod)) return;
    if ((k == OpKind::Add || k == OpKind::Mul) && a > b) return;
    if (la && lb) {
      std::uint64_t v = 0;
      EvalErrorKind err{};
      if (!apply_arith(k, la->value, lb->value, DivMode::Total, v, err)) return;
      if (std::find(literals_.begin(), literals_.end(), v) != literals_.end()) return;
    }
    pool_.push_back({static_cast<int>(o), a, b});
  }

  std::vector<Leaf> leaves_;
  std::vector<OpKind> ops_;
  std::vector<std::uint64_t> literals_;
  std::vector<Node> pool_;
};

// Visits k-tuples over 0..n-1 by increasing largest index; for k > 1 at most `cap` of them.
void for_each_tuple(std::size_t k, std::size_t n, std::uint64_t cap,
                    const std::function<bool(const std::vector<std::uint32_t>&)>& f) {
  std::vector<std::uint32_t> t(k, 0);
  std::uint64_t visited = 0;
  if (k == 1) {
    for (std::uint32_t i = 0; i < n; ++i) {
      t[0] = i;
      if (!f(t)) return;
    }
    return;
  }
  for (std::uint32_t m = 0; m < n; ++m) {
    std::fill(t.begin(), t.end(), 0);
    for (;;) {
      if (*std::max_element(t.begin(), t.end()) == m) {
        if (visited++ >= cap) return;
        if (!f(t)) return;
      }
      std::size_t i = k;
      bool done = true;
      while (i > 0) {
        --i;
        if (t[i] < m) {
          ++t[i];
          std::fill(t.begin() + static_cast<std::ptrdiff_t>(i) + 1, t.end(), 0);
          done = false;
          break;
        }
      }
      if (done) break;
    }
  }
}

struct Layout {
  std::vector<std::string> names;
  std::size_t program_count = 0;

  std::size_t slot(const std::string& n) const {
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), n) - names.begin());
  }
  std::vector<std::uint64_t> fill(const Store& s) const {
    std::vector<std::uint64_t> out(names.size(), 0);
    for (std::size_t i = 0; i < program_count; ++i) {
      auto it = s.find(names[i]);
      if (it != s.end()) out[i] = it->second;
    }
    return out;
  }
  Store store(const std::vector<std::uint64_t>& v, bool genvars) const {
    Store s;
    for (std::size_t i = 0; i < (genvars ? names.size() : program_count); ++i) s[names[i]] = v[i];
    return s;
  }
};

struct Component {
  std::vector<std::string> genvars;
  std::vector<std::size_t> slots;
  std::vector<CompiledExpr> conjuncts;
};

class Search {
 public:
  Search(const Triple& t, const Stmt& loop, const Expr& inv, const VarSet& genvars, const Expr& post,
         const SolverConfig& cfg, SolverStats& stats)
      : t_(t), loop_(loop), inv_(inv), genvars_(genvars), post_(post), cfg_(cfg), stats_(stats) {
    auto* w = loop.as<stmt::While>();
    VarSet prog = program_vars(t);
    for (const auto& e : {inv, post}) {
      auto fv = free_vars(e);
      prog.insert(fv.begin(), fv.end());
    }
    for (const auto& g : genvars) prog.erase(g);
    layout_.names.assign(prog.begin(), prog.end());
    layout_.program_count = layout_.names.size();
    for (const auto& g : genvars) layout_.names.push_back(g);
    cond_ = CompiledExpr::compile(w->cond, layout_.names);

    for (const auto& run : trajectories(t, loop, cfg)) {
      std::vector<std::vector<std::uint64_t>> heads;
      for (const auto& h : run.heads) heads.push_back(layout_.fill(h));
      runs_.push_back({std::move(heads), run.exited});
    }
    split_components();
  }

  std::optional<Assignment> run(Verdict& failure) {
    Assignment a;
    for (const auto& c : components_) {
      auto initials = initial_candidates(c, failure);
      if (initials.empty()) return std::nullopt;
      bool found = false;
      for (const auto& init : initials) {
        if (auto step = step_for(c, init, failure)) {
          for (std::size_t j = 0; j < c.genvars.size(); ++j) a.initial[c.genvars[j]] = init_space(c).to_expr(init[j]);
          const TemplateSpace& space = step_space(c);
          const std::size_t k = c.genvars.size();
          for (std::size_t j = 0; j < k; ++j) a.step[c.genvars[j]] = space.to_expr(step->first[j]);
          if (step->second) {
            a.step_condition = step_condition(loop_.as<stmt::While>()->body);
            for (std::size_t j = 0; j < k; ++j) a.step_otherwise[c.genvars[j]] = space.to_expr(step->first[k + j]);
          }
          found = true;
          break;
        }
      }
      if (!found) return std::nullopt;
    }
    if (!finals(a, failure)) return std::nullopt;
    // Unconditional components keep their step on both sides of a conditional one.
    if (a.step_condition) {
      for (const auto& [g, e] : a.step)
        if (!a.step_otherwise.count(g)) a.step_otherwise[g] = e;
    }
    return a;
  }

 private:
  using Tuple = std::vector<std::uint32_t>;

  void split_components() {
    std::vector<Expr> conj = top_conjuncts(inv_);
    std::map<std::string, std::string> parent;
    for (const auto& g : genvars_) parent[g] = g;
    std::function<std::string(const std::string&)> find = [&](const std::string& x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const auto& c : conj) {
      std::vector<std::string> gs;
      for (const auto& v : free_vars(c))
        if (genvars_.count(v)) gs.push_back(v);
      for (std::size_t i = 1; i < gs.size(); ++i) parent[find(gs[i])] = find(gs[0]);
    }
    std::map<std::string, std::size_t> index;
    for (const auto& g : genvars_) {
      const std::string root = find(g);
      if (!index.count(root)) {
        index[root] = components_.size();
        components_.emplace_back();
      }
      auto& comp = components_[index[root]];
      comp.genvars.push_back(g);
      comp.slots.push_back(layout_.slot(g));
    }
    for (const auto& c : conj) {
      for (const auto& v : free_vars(c)) {
        if (!genvars_.count(v)) continue;
        components_[index[find(v)]].conjuncts.push_back(CompiledExpr::compile(c, layout_.names));
        break;
      }
    }
  }

  bool satisfied(const Component& c, const std::vector<std::uint64_t>& slots) {
    ++stats_.stores_tested;
    for (const auto& e : c.conjuncts) {
      std::uint64_t out = 0;
      if (!e.eval(slots.data(), out, cfg_.division) || out == 0) return false;
    }
    return true;
  }

  std::vector<TemplateSpace::Leaf> leaves(const std::vector<std::string>& genvars) const {
    std::vector<TemplateSpace::Leaf> out;
    for (auto v : cfg_.literal_pool) out.push_back({true, v, ""});
    for (const auto& g : genvars) out.push_back({false, layout_.slot(g), g});
    for (std::size_t i = 0; i < layout_.program_count; ++i) out.push_back({false, i, layout_.names[i]});
    return out;
  }

  const TemplateSpace& init_space(const Component&) {
    if (!plain_) plain_.emplace(leaves({}), cfg_);
    return *plain_;
  }

  const TemplateSpace& step_space(const Component& c) {
    const std::string key = [&] {
      std::string k;
      for (const auto& g : c.genvars) k += g + ",";
      return k;
    }();
    auto it = step_spaces_.find(key);
    if (it == step_spaces_.end()) it = step_spaces_.emplace(key, TemplateSpace(leaves(c.genvars), cfg_)).first;
    return it->second;
  }

  void blame(std::map<std::size_t, std::uint64_t>& counts, std::size_t point) { ++counts[point]; }

  void report(Verdict& v, int requirement, const std::map<std::size_t, std::uint64_t>& counts,
              const std::vector<std::vector<std::uint64_t>>& points, const std::string& note) {
    v.status = Verdict::Status::NoCandidate;
    v.requirement = requirement;
    v.note = note;
    std::size_t worst = 0;
    std::uint64_t most = 0;
    for (const auto& [p, n] : counts) {
      if (n > most) {
        most = n;
        worst = p;
      }
    }
    if (!points.empty()) v.counterexample = layout_.store(points[worst], requirement == 2);
  }

  std::vector<Tuple> initial_candidates(const Component& c, Verdict& failure) {
    const TemplateSpace& space = init_space(c);
    std::vector<std::vector<std::uint64_t>> points;
    for (const auto& r : runs_)
      if (!r.heads.empty()) points.push_back(r.heads.front());
    std::vector<Tuple> found;
    std::set<std::vector<std::uint64_t>> seen;
    std::map<std::size_t, std::uint64_t> rejected;
    const std::size_t k = c.genvars.size();
    for_each_tuple(k, space.size(), cfg_.tuple_cap, [&](const Tuple& tpl) {
      ++stats_.candidates_tried;
      std::vector<std::uint64_t> values;
      for (std::size_t p = 0; p < points.size(); ++p) {
        auto slots = points[p];
        for (std::size_t j = 0; j < k; ++j) {
          std::uint64_t v = 0;
          if (!space.eval(tpl[j], points[p].data(), cfg_.division, v)) {
            blame(rejected, p);
            return true;
          }
          slots[c.slots[j]] = v;
          values.push_back(v);
        }
        if (!satisfied(c, slots)) {
          blame(rejected, p);
          return true;
        }
      }
      if (seen.insert(values).second) found.push_back(tpl);
      return found.size() < cfg_.initial_alternatives;
    });
    if (found.empty())
      report(failure, 1, rejected, points, "no initial value for " + names(c) + " at every loop arrival");
    return found;
  }

  static std::string names(const Component& c) {
    std::string s;
    for (const auto& g : c.genvars) s += (s.empty() ? "" : ", ") + g;
    return s;
  }

  // Step templates (unconditional: k entries; conditional: then-part followed by else-part).
  std::optional<std::pair<Tuple, bool>> step_for(const Component& c, const Tuple& init, Verdict& failure) {
    const TemplateSpace& ispace = init_space(c);
    const TemplateSpace& space = step_space(c);
    const std::size_t k = c.genvars.size();
    std::map<std::size_t, std::uint64_t> rejected;
    std::vector<std::vector<std::uint64_t>> blamed_points;
    std::map<std::vector<std::uint64_t>, std::size_t> point_ids;

    auto simulate = [&](const Tuple& tpl, bool conditional) {
      ++stats_.candidates_tried;
      for (const auto& r : runs_) {
        if (r.heads.empty()) continue;
        std::vector<std::uint64_t> g(k, 0);
        for (std::size_t j = 0; j < k; ++j)
          if (!ispace.eval(init[j], r.heads.front().data(), cfg_.division, g[j])) return false;
        for (std::size_t i = 0; i + 1 < r.heads.size(); ++i) {
          auto before = r.heads[i];
          for (std::size_t j = 0; j < k; ++j) before[c.slots[j]] = g[j];
          std::size_t offset = 0;
          if (conditional) {
            std::uint64_t b = 0;
            EvalErrorKind err{};
            if (!cond_.eval(before.data(), b, DivMode::Strict, &err)) b = 0;
            offset = b ? 0 : k;
          }
          auto after = r.heads[i + 1];
          std::vector<std::uint64_t> next(k, 0);
          bool ok = true;
          for (std::size_t j = 0; j < k && ok; ++j) ok = space.eval(tpl[offset + j], before.data(), cfg_.division, next[j]);
          if (ok) {
            for (std::size_t j = 0; j < k; ++j) after[c.slots[j]] = next[j];
            ok = satisfied(c, after);
          }
          if (!ok) {
            auto [it, fresh] = point_ids.emplace(before, blamed_points.size());
            if (fresh) blamed_points.push_back(before);
            blame(rejected, it->second);
            return false;
          }
          g = next;
        }
      }
      return true;
    };

    std::optional<std::pair<Tuple, bool>> result;
    for_each_tuple(k, space.size(), cfg_.tuple_cap, [&](const Tuple& tpl) {
      if (!simulate(tpl, false)) return true;
      result = std::pair{tpl, false};
      return false;
    });
    if (result) return result;
    if (step_condition(loop_.as<stmt::While>()->body)) {
      for_each_tuple(2 * k, space.size(), cfg_.tuple_cap, [&](const Tuple& tpl) {
        if (!simulate(tpl, true)) return true;
        result = std::pair{tpl, true};
        return false;
      });
    }
    if (!result)
      report(failure, 2, rejected, blamed_points, "no step for " + names(c) + " along every iteration");
    return result;
  }

  bool finals(Assignment& a, Verdict& failure) {
    const TemplateSpace& space = init_space(components_.empty() ? Component{} : components_.front());
    std::vector<std::vector<std::uint64_t>> exits;
    for (const auto& r : runs_)
      if (r.exited) exits.push_back(r.heads.back());
    std::vector<std::vector<Tuple>> per_component;
    for (const auto& c : components_) {
      const std::size_t k = c.genvars.size();
      std::vector<Tuple> found;
      std::map<std::size_t, std::uint64_t> rejected;
      for_each_tuple(k, space.size(), cfg_.tuple_cap, [&](const Tuple& tpl) {
        ++stats_.candidates_tried;
        for (std::size_t p = 0; p < exits.size(); ++p) {
          auto slots = exits[p];
          for (std::size_t j = 0; j < k; ++j) {
            std::uint64_t v = 0;
            if (!space.eval(tpl[j], exits[p].data(), cfg_.division, v)) {
              blame(rejected, p);
              return true;
            }
            slots[c.slots[j]] = v;
          }
          if (!satisfied(c, slots)) {
            blame(rejected, p);
            return true;
          }
        }
        found.push_back(tpl);
        return found.size() < cfg_.final_alternatives;
      });
      if (found.empty()) {
        report(failure, 3, rejected, exits, "no final value for " + names(c) + " at every loop exit");
        return false;
      }
      per_component.push_back(std::move(found));
    }

    // Universal sufficiency over the domain, for each combination of per-component finals.
    auto* w = loop_.as<stmt::While>();
    VarSet used;
    for (const auto& e : {inv_, w->cond, post_}) {
      auto fv = free_vars(e);
      used.insert(fv.begin(), fv.end());
    }
    for (const auto& g : genvars_) used.erase(g);
    const std::vector<std::string> dom(used.begin(), used.end());
    const CompiledExpr inv = CompiledExpr::compile(inv_, layout_.names);
    const CompiledExpr post = CompiledExpr::compile(post_, layout_.names);
    std::vector<std::vector<std::uint64_t>> stores;
    for_each_store(dom, cfg_.domain_bound, {}, [&](const Store& s) {
      auto slots = layout_.fill(s);
      std::uint64_t b = 0;
      if (!cond_.eval(slots.data(), b, DivMode::Strict) || b) return true;
      stores.push_back(std::move(slots));
      return true;
    });

    std::vector<std::size_t> choice(per_component.size(), 0);
    std::map<std::size_t, std::uint64_t> rejected;
    for (;;) {
      ++stats_.candidates_tried;
      bool ok = true;
      for (std::size_t p = 0; p < stores.size() && ok; ++p) {
        auto slots = stores[p];
        for (std::size_t ci = 0; ci < components_.size(); ++ci) {
          const auto& c = components_[ci];
          for (std::size_t j = 0; j < c.genvars.size(); ++j)
            space.eval(per_component[ci][choice[ci]][j], stores[p].data(), cfg_.division, slots[c.slots[j]]);
        }
        ++stats_.stores_tested;
        std::uint64_t i = 0, q = 0;
        if (!inv.eval(slots.data(), i, cfg_.division) || !i) continue;
        if (!post.eval(slots.data(), q, DivMode::Strict)) continue;
        if (!q) {
          ok = false;
          blame(rejected, p);
        }
      }
      if (ok) {
        for (std::size_t ci = 0; ci < components_.size(); ++ci) {
          const auto& c = components_[ci];
          for (std::size_t j = 0; j < c.genvars.size(); ++j)
            a.final[c.genvars[j]] = space.to_expr(per_component[ci][choice[ci]][j]);
        }
        return true;
      }
      std::size_t i = choice.size();
      for (;;) {
        if (i == 0) {
          report(failure, 3, rejected, stores, "no final values make I ∧ ¬B imply the postcondition");
          return false;
        }
        --i;
        if (choice[i] + 1 < per_component[i].size()) {
          ++choice[i];
          break;
        }
        choice[i] = 0;
      }
    }
  }

  const Triple& t_;
  const Stmt& loop_;
  Expr inv_;
  VarSet genvars_;
  Expr post_;
  const SolverConfig& cfg_;
  SolverStats& stats_;
  Layout layout_;
  CompiledExpr cond_;
  struct Points {
    std::vector<std::vector<std::uint64_t>> heads;
    bool exited;
  };
  std::vector<Points> runs_;
  std::vector<Component> components_;
  std::optional<TemplateSpace> plain_;
  std::map<std::string, TemplateSpace> step_spaces_;
};

}  // namespace

std::vector<Store> input_stores(const Triple& t, std::uint64_t bound) {
  Store base;
  for (const auto& v : program_vars(t)) base[v] = 0;
  const VarSet in = input_vars(t);
  const std::vector<std::string> names(in.begin(), in.end());
  std::vector<Store> out;
  for_each_store(names, bound, base, [&](const Store& s) {
    if (holds(t.pre, s)) out.push_back(s);
    return true;
  });
  return out;
}

Verdict check_requirements(const Triple& t, const Stmt& loop, const Expr& invariant, const VarSet& genvars,
                           const Assignment& a, const Expr& post, const SolverConfig& cfg, SolverStats* stats) {
  SolverStats local;
  SolverStats& st = stats ? *stats : local;
  auto* w = loop.as<stmt::While>();
  const DivMode mode = cfg.division;
  auto fail = [&](int req, const Store& s, std::string note) {
    Verdict v;
    v.status = Verdict::Status::Failed;
    v.requirement = req;
    v.counterexample = s;
    v.note = std::move(note);
    return v;
  };
  auto holds_at = [&](const Expr& e, const Store& s) {
    ++st.stores_tested;
    return holds(e, s, nullptr, mode);
  };

  for (const auto& run : trajectories(t, loop, cfg)) {
    Store g;
    const Store& entry = run.heads.front();
    if (!eval_all(a.initial, entry, mode, g)) return fail(1, entry, "initial value does not evaluate");
    Store s = entry;
    for (const auto& [k, v] : g) s[k] = v;
    if (!holds_at(invariant, s)) return fail(1, entry, "invariant does not hold on arrival");
    for (std::size_t i = 0; i + 1 < run.heads.size(); ++i) {
      Store before = run.heads[i];
      for (const auto& [k, v] : g) before[k] = v;
      const Subst* step = &a.step;
      if (a.step_condition && !holds(*a.step_condition, before)) step = &a.step_otherwise;
      Store next;
      if (!eval_all(*step, before, mode, next)) return fail(2, before, "step does not evaluate");
      Store after = run.heads[i + 1];
      for (const auto& [k, v] : next) after[k] = v;
      if (!holds_at(invariant, after)) return fail(2, before, "invariant not preserved by the body");
      g = next;
    }
    if (run.exited) {
      Store fin;
      Store exit = run.heads.back();
      if (!eval_all(a.final, exit, mode, fin)) return fail(3, exit, "final value does not evaluate");
      for (const auto& [k, v] : fin) exit[k] = v;
      if (!holds_at(invariant, exit)) return fail(3, run.heads.back(), "final values do not satisfy the invariant at exit");
    }
  }

  VarSet used;
  for (const auto& e : {invariant, w->cond, post}) {
    auto fv = free_vars(e);
    used.insert(fv.begin(), fv.end());
  }
  for (const auto& g : genvars) used.erase(g);
  std::optional<Verdict> failure;
  for_each_store({used.begin(), used.end()}, cfg.domain_bound, {}, [&](const Store& s) {
    bool errored = false;
    if (holds(w->cond, s, &errored) || errored) return true;
    Store fin = s;
    if (!eval_all(a.final, s, mode, fin)) return true;
    if (!holds_at(invariant, fin)) return true;
    const bool q = holds(post, s, &errored);
    if (!q && !errored) {
      failure = fail(3, fin, "I ∧ ¬B does not imply the postcondition");
      return false;
    }
    return true;
  });
  if (failure) return *failure;

  if (genvars.empty()) {
    VarSet vars = program_vars(loop);
    auto fv = free_vars(invariant);
    vars.insert(fv.begin(), fv.end());
    for_each_store({vars.begin(), vars.end()}, cfg.domain_bound, {}, [&](const Store& s) {
      bool errored = false;
      if (!holds(w->cond, s, &errored) || !holds_at(invariant, s)) return true;
      auto out = exec(w->body, s, cfg.fuel);
      if (out.kind != ExecOutcome::Kind::Finished) return true;
      if (!holds_at(invariant, out.store)) {
        failure = fail(2, s, "{I ∧ B} S {I} fails");
        return false;
      }
      return true;
    });
    if (failure) return *failure;
  }
  Verdict ok;
  ok.status = Verdict::Status::VerifiedUpToBound;
  return ok;
}

InvariantReport solve(const Triple& t, const Stmt& loop, const Expr& putative, const VarSet& genvars,
                      const Expr& post, const SolverConfig& cfg) {
  InvariantReport r;
  auto* w = loop.as<stmt::While>();
  r.location = w->loc;
  r.invariant = putative;
  r.post = post;
  r.genvars = genvars;
  r.lost_variables = diagnose_lost_variables(putative, w->body);
  Assignment a;
  if (!genvars.empty()) {
    Search search(t, loop, putative, genvars, post, cfg, r.stats);
    Verdict failure;
    auto found = search.run(failure);
    if (!found) {
      r.verdict = failure;
      return r;
    }
    a = *found;
  }
  r.assignment = a;
  r.verdict = check_requirements(t, loop, putative, genvars, a, post, cfg, &r.stats);
  return r;
}

}  // namespace loopinv
