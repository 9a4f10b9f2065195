#include "loopinv/embed.hpp"

#include <map>
#include <tuple>

namespace loopinv {

std::string FreshSupply::next() {
  for (;;) {
    std::string name = prefix_ + std::to_string(++counter_);
    if (reserved_.count(name) || issued_.count(name)) continue;
    issued_.insert(name);
    return name;
  }
}

namespace {

// Root symbol of a non-variable term together with its arguments.
struct Functor {
  int tag = 0;
  std::uint64_t code = 0;
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Functor& a, const Functor& b) {
    return std::tie(a.tag, a.code, a.name, a.arity) == std::tie(b.tag, b.code, b.name, b.arity);
  }
};

struct View {
  Functor f;
  std::vector<Expr> args;
};

std::vector<Expr> spine(const Expr& e) {
  if (auto* a = e.as<node::App>()) {
    auto out = spine(a->fun);
    out.push_back(a->arg);
    return out;
  }
  return {e};
}

// Numerals are viewed as Zero / Succ(n-1).
View view(const Expr& e) {
  View v;
  v.f.tag = static_cast<int>(e.node().index());
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Num>) {
          v.f.tag = static_cast<int>(Expr::Node(node::Ctor{}).index());
          v.f.code = static_cast<std::uint64_t>(x.value == 0 ? CtorKind::Zero : CtorKind::Succ);
          if (x.value > 0) v.args.push_back(num(x.value - 1));
        } else if constexpr (std::is_same_v<T, node::Ctor>) {
          v.f.code = static_cast<std::uint64_t>(x.kind);
          v.args = x.args;
        } else if constexpr (std::is_same_v<T, node::Op>) {
          v.f.code = static_cast<std::uint64_t>(x.op);
          v.args = x.args;
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          v.args = {x.body};
        } else if constexpr (std::is_same_v<T, node::BoundVar>) {
          v.f.code = x.index;
        } else if constexpr (std::is_same_v<T, node::Call>) {
          v.f.name = x.name;
        } else if constexpr (std::is_same_v<T, node::App>) {
          v.args = spine(e);
        } else if constexpr (std::is_same_v<T, node::Case>) {
          v.args.push_back(x.scrutinee);
          for (const auto& b : x.branches) {
            v.f.name += b.ctor + "/" + std::to_string(b.arity) + ";";
            v.args.push_back(b.body);
          }
        } else if constexpr (std::is_same_v<T, node::Where>) {
          v.args.push_back(x.main);
          for (const auto& [name, def] : x.defs) {
            v.f.name += name + ";";
            v.args.push_back(def);
          }
        }
      },
      e.node());
  v.f.arity = v.args.size();
  return v;
}

Expr rebuild(const Expr& original, const std::vector<Expr>& args) {
  return std::visit(
      [&](const auto& x) -> Expr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Ctor>) {
          return ctor(x.kind, args);
        } else if constexpr (std::is_same_v<T, node::Op>) {
          return op(x.op, args);
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          return lam(args[0]);
        } else if constexpr (std::is_same_v<T, node::App>) {
          Expr acc = args[0];
          for (std::size_t i = 1; i < args.size(); ++i) acc = app(acc, args[i]);
          return acc;
        } else if constexpr (std::is_same_v<T, node::Case>) {
          std::vector<node::CaseBranch> branches = x.branches;
          for (std::size_t i = 0; i < branches.size(); ++i) branches[i].body = args[i + 1];
          return case_of(args[0], std::move(branches));
        } else if constexpr (std::is_same_v<T, node::Where>) {
          auto defs = x.defs;
          for (std::size_t i = 0; i < defs.size(); ++i) defs[i].second = args[i + 1];
          return where(args[0], std::move(defs));
        } else {
          return original;
        }
      },
      original.node());
}

class Embedding {
 public:
  bool embeds(const Expr& a, const Expr& b) {
    // Numeral views create temporary nodes, whose addresses must not enter the memo.
    if (a.is<node::Num>() || b.is<node::Num>()) return compute(a, b);
    const auto key = std::pair{a.id(), b.id()};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool r = compute(a, b);
    memo_[key] = r;
    return r;
  }

  bool couples(const Expr& a, const Expr& b) {
    if (a.is<node::Var>() || b.is<node::Var>()) return false;
    auto* na = a.as<node::Num>();
    auto* nb = b.as<node::Num>();
    if (na && nb) return (na->value == 0) == (nb->value == 0) && na->value <= nb->value;
    const View va = view(a);
    const View vb = view(b);
    if (!(va.f == vb.f)) return false;
    for (std::size_t i = 0; i < va.args.size(); ++i)
      if (!embeds(va.args[i], vb.args[i])) return false;
    return true;
  }

 private:
  bool compute(const Expr& a, const Expr& b) {
    if (a.is<node::Var>() && b.is<node::Var>()) return true;
    auto* na = a.as<node::Num>();
    if (auto* nb = b.as<node::Num>()) return na != nullptr && na->value <= nb->value;
    if (!a.is<node::Var>() && couples(a, b)) return true;
    for (const auto& child : view(b).args)
      if (embeds(a, child)) return true;
    return false;
  }

  std::map<std::pair<const void*, const void*>, bool> memo_;
};

class Generaliser {
 public:
  explicit Generaliser(FreshSupply& fresh) : fresh_(fresh) {}

  Expr gen(const Expr& a, const Expr& b) {
    if (a == b) return a;
    const bool atomic = a.is<node::Var>() || b.is<node::Var>() || a.is<node::Num>() || b.is<node::Num>();
    if (!atomic && a.node().index() == b.node().index()) {
      const View va = view(a);
      const View vb = view(b);
      if (va.f == vb.f) {
        std::vector<Expr> args;
        for (std::size_t i = 0; i < va.args.size(); ++i) args.push_back(gen(va.args[i], vb.args[i]));
        return rebuild(a, args);
      }
    }
    const std::string g = fresh_.next();
    introduced.push_back(g);
    left[g] = a;
    right[g] = b;
    return var(g);
  }

  std::vector<std::string> introduced;
  Subst left;
  Subst right;

 private:
  FreshSupply& fresh_;
};

}  // namespace

bool embeds(const Expr& e1, const Expr& e2) { return Embedding().embeds(e1, e2); }

bool coupled(const Expr& e1, const Expr& e2) { return Embedding().couples(e1, e2); }

GenResult generalise(const Expr& e1, const Expr& e2, FreshSupply& fresh) {
  Generaliser g(fresh);
  Expr out = g.gen(e1, e2);
  return {out, g.left, g.right};
}

GenResult msg(const Expr& e1, const Expr& e2, FreshSupply& fresh) {
  Generaliser g(fresh);
  Expr out = g.gen(e1, e2);
  std::map<std::pair<Expr, Expr>, std::string> first;
  Subst rename;
  for (const auto& v : g.introduced) {
    auto key = std::pair{g.left[v], g.right[v]};
    auto [it, inserted] = first.emplace(key, v);
    if (inserted) continue;
    rename[v] = var(it->second);
    g.left.erase(v);
    g.right.erase(v);
  }
  if (!rename.empty()) out = substitute(out, rename);
  return {out, g.left, g.right};
}

Expr msg_list(const std::vector<Expr>& es, FreshSupply& fresh) {
  std::vector<Expr> kept;
  for (const auto& e : es)
    if (!e.is_true()) kept.push_back(e);
  if (kept.empty()) return truth(true);
  Expr acc = kept[0];
  for (std::size_t i = 1; i < kept.size(); ++i) acc = msg(acc, kept[i], fresh).generalised;
  return acc;
}

}  // namespace loopinv
