#include "loopinv/expr.hpp"

#include <stdexcept>
#include <tuple>

namespace loopinv {

bool is_arith(OpKind op) {
  switch (op) {
    case OpKind::Add: case OpKind::Sub: case OpKind::Mul:
    case OpKind::Div: case OpKind::Mod: case OpKind::Pow:
      return true;
    default:
      return false;
  }
}

bool is_relation(OpKind op) {
  switch (op) {
    case OpKind::Lt: case OpKind::Gt: case OpKind::Le:
    case OpKind::Ge: case OpKind::Eq: case OpKind::Ne:
      return true;
    default:
      return false;
  }
}

bool is_logical(OpKind op) { return !is_arith(op) && !is_relation(op); }

bool is_associative(OpKind op) {
  return op == OpKind::Add || op == OpKind::Mul || op == OpKind::And || op == OpKind::Or;
}

std::size_t arity(OpKind op) { return op == OpKind::Not ? 1 : 2; }

std::size_t arity(CtorKind c) { return c == CtorKind::Succ ? 1 : 0; }

const char* symbol(OpKind op) {
  switch (op) {
    case OpKind::Add: return "+";
    case OpKind::Sub: return "-";
    case OpKind::Mul: return "*";
    case OpKind::Div: return "/";
    case OpKind::Mod: return "%";
    case OpKind::Pow: return "^";
    case OpKind::And: return "∧";
    case OpKind::Or: return "∨";
    case OpKind::Not: return "¬";
    case OpKind::Implies: return "⇒";
    case OpKind::Lt: return "<";
    case OpKind::Gt: return ">";
    case OpKind::Le: return "≤";
    case OpKind::Ge: return "≥";
    case OpKind::Eq: return "=";
    case OpKind::Ne: return "≠";
  }
  return "?";
}

Expr make(Expr::Node n) { return Expr(std::make_shared<const Expr::Node>(std::move(n))); }

Expr::Expr() : Expr(truth(true)) {}

bool Expr::is_op(OpKind k) const {
  auto* o = as<node::Op>();
  return o != nullptr && o->op == k;
}

bool Expr::is_true() const {
  auto* c = as<node::Ctor>();
  return c != nullptr && c->kind == CtorKind::True;
}

bool Expr::is_false() const {
  auto* c = as<node::Ctor>();
  return c != nullptr && c->kind == CtorKind::False;
}

const std::vector<Expr>& Expr::args() const {
  static const std::vector<Expr> none;
  if (auto* o = as<node::Op>()) return o->args;
  return none;
}

OpKind Expr::op() const { return std::get<node::Op>(*node_).op; }

namespace {

// Index of the variant alternative doubles as the first sort key.
int compare(const Expr& a, const Expr& b);

int compare_lists(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (int c = compare(a[i], b[i]); c != 0) return c;
  }
  return 0;
}

template <class T>
int three_way(const T& a, const T& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

int compare(const Expr& a, const Expr& b) {
  if (&a.node() == &b.node()) return 0;
  if (a.node().index() != b.node().index()) return three_way(a.node().index(), b.node().index());
  return std::visit(
      [&](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, node::Var>) {
          return three_way(x.name, y.name);
        } else if constexpr (std::is_same_v<T, node::Num>) {
          return three_way(x.value, y.value);
        } else if constexpr (std::is_same_v<T, node::Ctor>) {
          if (x.kind != y.kind) return three_way(x.kind, y.kind);
          return compare_lists(x.args, y.args);
        } else if constexpr (std::is_same_v<T, node::Op>) {
          if (x.op != y.op) return three_way(x.op, y.op);
          return compare_lists(x.args, y.args);
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          return compare(x.body, y.body);
        } else if constexpr (std::is_same_v<T, node::BoundVar>) {
          return three_way(x.index, y.index);
        } else if constexpr (std::is_same_v<T, node::Call>) {
          return three_way(x.name, y.name);
        } else if constexpr (std::is_same_v<T, node::App>) {
          if (int c = compare(x.fun, y.fun); c != 0) return c;
          return compare(x.arg, y.arg);
        } else if constexpr (std::is_same_v<T, node::Case>) {
          if (int c = compare(x.scrutinee, y.scrutinee); c != 0) return c;
          if (x.branches.size() != y.branches.size())
            return three_way(x.branches.size(), y.branches.size());
          for (std::size_t i = 0; i < x.branches.size(); ++i) {
            const auto& bx = x.branches[i];
            const auto& by = y.branches[i];
            if (int c = three_way(std::tie(bx.ctor, bx.arity), std::tie(by.ctor, by.arity)); c != 0)
              return c;
            if (int c = compare(bx.body, by.body); c != 0) return c;
          }
          return 0;
        } else {
          if (int c = compare(x.main, y.main); c != 0) return c;
          if (x.defs.size() != y.defs.size()) return three_way(x.defs.size(), y.defs.size());
          for (std::size_t i = 0; i < x.defs.size(); ++i) {
            if (int c = three_way(x.defs[i].first, y.defs[i].first); c != 0) return c;
            if (int c = compare(x.defs[i].second, y.defs[i].second); c != 0) return c;
          }
          return 0;
        }
      },
      a.node());
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

std::size_t Expr::size() const {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        std::size_t n = 1;
        if constexpr (std::is_same_v<T, node::Ctor> || std::is_same_v<T, node::Op>) {
          for (const auto& a : x.args) n += a.size();
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          n += x.body.size();
        } else if constexpr (std::is_same_v<T, node::App>) {
          n += x.fun.size() + x.arg.size();
        } else if constexpr (std::is_same_v<T, node::Case>) {
          n += x.scrutinee.size();
          for (const auto& b : x.branches) n += b.body.size();
        } else if constexpr (std::is_same_v<T, node::Where>) {
          n += x.main.size();
          for (const auto& d : x.defs) n += d.second.size();
        }
        return n;
      },
      node());
}

Expr var(std::string name) { return make(node::Var{std::move(name)}); }
Expr num(std::uint64_t value) { return make(node::Num{value}); }

Expr ctor(CtorKind kind, std::vector<Expr> args) {
  if (args.size() != arity(kind)) throw std::invalid_argument("constructor arity mismatch");
  if (kind == CtorKind::Zero) return num(0);
  if (kind == CtorKind::Succ) {
    if (auto* n = args[0].as<node::Num>()) return num(n->value + 1);
  }
  return make(node::Ctor{kind, std::move(args)});
}

Expr truth(bool value) {
  static const Expr t = make(node::Ctor{CtorKind::True, {}});
  static const Expr f = make(node::Ctor{CtorKind::False, {}});
  return value ? t : f;
}

Expr op(OpKind kind, std::vector<Expr> args) {
  if (args.size() != arity(kind)) throw std::invalid_argument("operator arity mismatch");
  return make(node::Op{kind, std::move(args)});
}

Expr op(OpKind kind, Expr a) { return op(kind, std::vector<Expr>{std::move(a)}); }
Expr op(OpKind kind, Expr a, Expr b) { return op(kind, std::vector<Expr>{std::move(a), std::move(b)}); }

Expr lam(Expr body) { return make(node::Lam{std::move(body)}); }
Expr bound(std::size_t index) { return make(node::BoundVar{index}); }
Expr call(std::string name) { return make(node::Call{std::move(name)}); }
Expr app(Expr fun, Expr arg) { return make(node::App{std::move(fun), std::move(arg)}); }

Expr case_of(Expr scrutinee, std::vector<node::CaseBranch> branches) {
  return make(node::Case{std::move(scrutinee), std::move(branches)});
}

Expr where(Expr main, std::vector<std::pair<std::string, Expr>> defs) {
  return make(node::Where{std::move(main), std::move(defs)});
}

Expr conjoin(const std::vector<Expr>& conjuncts) {
  if (conjuncts.empty()) return truth(true);
  Expr acc = conjuncts.back();
  for (std::size_t i = conjuncts.size() - 1; i-- > 0;) acc = conjuncts[i] && acc;
  return acc;
}

namespace {

template <class F>
Expr map_children(const Expr& e, F&& f) {
  return std::visit(
      [&](const auto& x) -> Expr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Ctor>) {
          std::vector<Expr> args;
          args.reserve(x.args.size());
          for (const auto& a : x.args) args.push_back(f(a));
          return ctor(x.kind, std::move(args));
        } else if constexpr (std::is_same_v<T, node::Op>) {
          std::vector<Expr> args;
          args.reserve(x.args.size());
          for (const auto& a : x.args) args.push_back(f(a));
          return op(x.op, std::move(args));
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          return lam(f(x.body));
        } else if constexpr (std::is_same_v<T, node::App>) {
          return app(f(x.fun), f(x.arg));
        } else if constexpr (std::is_same_v<T, node::Case>) {
          std::vector<node::CaseBranch> bs;
          for (const auto& b : x.branches) bs.push_back({b.ctor, b.arity, f(b.body)});
          return case_of(f(x.scrutinee), std::move(bs));
        } else if constexpr (std::is_same_v<T, node::Where>) {
          std::vector<std::pair<std::string, Expr>> ds;
          for (const auto& d : x.defs) ds.emplace_back(d.first, f(d.second));
          return where(f(x.main), std::move(ds));
        } else {
          return e;
        }
      },
      e.node());
}

template <class F>
void for_children(const Expr& e, F&& f) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Ctor> || std::is_same_v<T, node::Op>) {
          for (const auto& a : x.args) f(a);
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          f(x.body);
        } else if constexpr (std::is_same_v<T, node::App>) {
          f(x.fun);
          f(x.arg);
        } else if constexpr (std::is_same_v<T, node::Case>) {
          f(x.scrutinee);
          for (const auto& b : x.branches) f(b.body);
        } else if constexpr (std::is_same_v<T, node::Where>) {
          f(x.main);
          for (const auto& d : x.defs) f(d.second);
        }
      },
      e.node());
}

}  // namespace

Expr substitute(const Expr& e, const Subst& theta) {
  if (theta.empty()) return e;
  if (auto* v = e.as<node::Var>()) {
    auto it = theta.find(v->name);
    return it == theta.end() ? e : it->second;
  }
  return map_children(e, [&](const Expr& c) { return substitute(c, theta); });
}

namespace {
void collect_free(const Expr& e, VarSet& out) {
  if (auto* v = e.as<node::Var>()) {
    out.insert(v->name);
    return;
  }
  for_children(e, [&](const Expr& c) { collect_free(c, out); });
}
}  // namespace

VarSet free_vars(const Expr& e) {
  VarSet out;
  collect_free(e, out);
  return out;
}

bool occurs_free(const std::string& name, const Expr& e) {
  if (auto* v = e.as<node::Var>()) return v->name == name;
  bool found = false;
  for_children(e, [&](const Expr& c) { found = found || occurs_free(name, c); });
  return found;
}

bool alpha_eq(const Expr& a, const Expr& b) { return a == b; }

namespace {

bool match_renaming(const Expr& a, const Expr& b, const VarSet& renameable, Renaming& fwd,
                    Renaming& back) {
  if (a.node().index() != b.node().index()) return false;
  if (auto* va = a.as<node::Var>()) {
    const auto& vb = std::get<node::Var>(b.node());
    const bool ra = renameable.count(va->name) > 0;
    const bool rb = renameable.count(vb.name) > 0;
    if (!ra && !rb) return va->name == vb.name;
    if (ra != rb) return false;
    // rho maps names of b onto names of a.
    auto [it, fresh] = back.emplace(vb.name, va->name);
    if (!fresh && it->second != va->name) return false;
    auto [jt, fresh2] = fwd.emplace(va->name, vb.name);
    if (!fresh2 && jt->second != vb.name) return false;
    return true;
  }
  // Compare the head without children, then recurse.
  bool heads_equal = std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, node::Num>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, node::Ctor>) return x.kind == y.kind;
        else if constexpr (std::is_same_v<T, node::Op>) return x.op == y.op;
        else if constexpr (std::is_same_v<T, node::BoundVar>) return x.index == y.index;
        else if constexpr (std::is_same_v<T, node::Call>) return x.name == y.name;
        else if constexpr (std::is_same_v<T, node::Case>) {
          if (x.branches.size() != y.branches.size()) return false;
          for (std::size_t i = 0; i < x.branches.size(); ++i)
            if (x.branches[i].ctor != y.branches[i].ctor || x.branches[i].arity != y.branches[i].arity)
              return false;
          return true;
        } else if constexpr (std::is_same_v<T, node::Where>) {
          if (x.defs.size() != y.defs.size()) return false;
          for (std::size_t i = 0; i < x.defs.size(); ++i)
            if (x.defs[i].first != y.defs[i].first) return false;
          return true;
        } else {
          return true;
        }
      },
      a.node());
  if (!heads_equal) return false;
  std::vector<Expr> ca, cb;
  for_children(a, [&](const Expr& c) { ca.push_back(c); });
  for_children(b, [&](const Expr& c) { cb.push_back(c); });
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!match_renaming(ca[i], cb[i], renameable, fwd, back)) return false;
  return true;
}

}  // namespace

std::optional<Renaming> renaming_of(const Expr& e1, const Expr& e2, const VarSet& renameable) {
  Renaming fwd, back;
  if (!match_renaming(e1, e2, renameable, fwd, back)) return std::nullopt;
  return back;
}

std::optional<Sort> infer_sort(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> std::optional<Sort> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Var> || std::is_same_v<T, node::Num>) {
          return Sort::Nat;
        } else if constexpr (std::is_same_v<T, node::Ctor>) {
          if (x.kind == CtorKind::True || x.kind == CtorKind::False) return Sort::Bool;
          for (const auto& a : x.args)
            if (infer_sort(a) != Sort::Nat) return std::nullopt;
          return Sort::Nat;
        } else if constexpr (std::is_same_v<T, node::Op>) {
          const Sort want = is_logical(x.op) ? Sort::Bool : Sort::Nat;
          for (const auto& a : x.args)
            if (infer_sort(a) != want) return std::nullopt;
          return is_arith(x.op) ? Sort::Nat : Sort::Bool;
        } else {
          // Functional machinery is not part of program-level assertions.
          return std::nullopt;
        }
      },
      e.node());
}

namespace {
bool closed_under(const Expr& e, std::size_t depth) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::BoundVar>) {
          return x.index < depth;
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          return closed_under(x.body, depth + 1);
        } else if constexpr (std::is_same_v<T, node::Case>) {
          if (!closed_under(x.scrutinee, depth)) return false;
          for (const auto& b : x.branches)
            if (!closed_under(b.body, depth + b.arity)) return false;
          return true;
        } else {
          bool ok = true;
          for_children(e, [&](const Expr& c) { ok = ok && closed_under(c, depth); });
          return ok;
        }
      },
      e.node());
}
}  // namespace

bool is_closed_under_binders(const Expr& e) { return closed_under(e, 0); }

}  // namespace loopinv
