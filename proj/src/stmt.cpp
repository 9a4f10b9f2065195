#include "loopinv/stmt.hpp"

namespace loopinv {

Stmt make_stmt(Stmt::Node n) { return Stmt(std::make_shared<const Stmt::Node>(std::move(n))); }

Stmt::Stmt() : Stmt(skip()) {}

bool operator==(const Stmt& a, const Stmt& b) {
  if (a.node_ == b.node_) return true;
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, stmt::Skip>) return true;
        else if constexpr (std::is_same_v<T, stmt::Assign>) return x.target == y.target && x.rhs == y.rhs;
        else if constexpr (std::is_same_v<T, stmt::Seq>) return x.first == y.first && x.second == y.second;
        else if constexpr (std::is_same_v<T, stmt::If>)
          return x.cond == y.cond && x.then_branch == y.then_branch && x.else_branch == y.else_branch;
        else if constexpr (std::is_same_v<T, stmt::Block>) return x.locals == y.locals && x.body == y.body;
        else
          return x.cond == y.cond && x.invariant == y.invariant && x.body == y.body && x.post == y.post;
      },
      a.node());
}

Stmt skip() {
  static const Stmt s = make_stmt(stmt::Skip{});
  return s;
}

Stmt assign(std::string target, Expr rhs) { return make_stmt(stmt::Assign{std::move(target), std::move(rhs)}); }
Stmt seq(Stmt first, Stmt second) { return make_stmt(stmt::Seq{std::move(first), std::move(second)}); }

Stmt seq(const std::vector<Stmt>& parts) {
  if (parts.empty()) return skip();
  Stmt acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = seq(parts[i], acc);
  return acc;
}

Stmt if_then_else(Expr cond, Stmt then_branch, Stmt else_branch) {
  return make_stmt(stmt::If{std::move(cond), std::move(then_branch), std::move(else_branch)});
}

Stmt block(std::vector<std::string> locals, Stmt body) {
  return make_stmt(stmt::Block{std::move(locals), std::move(body)});
}

Stmt while_loop(Expr cond, Stmt body, std::optional<Expr> invariant, std::optional<Expr> post,
                SourceLoc loc) {
  return make_stmt(stmt::While{std::move(cond), std::move(invariant), std::move(body), std::move(post), loc});
}

namespace {

void collect_assigned(const Stmt& s, VarSet& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, stmt::Assign>) {
          out.insert(x.target);
        } else if constexpr (std::is_same_v<T, stmt::Seq>) {
          collect_assigned(x.first, out);
          collect_assigned(x.second, out);
        } else if constexpr (std::is_same_v<T, stmt::If>) {
          collect_assigned(x.then_branch, out);
          collect_assigned(x.else_branch, out);
        } else if constexpr (std::is_same_v<T, stmt::Block>) {
          out.insert(x.locals.begin(), x.locals.end());
          collect_assigned(x.body, out);
        } else if constexpr (std::is_same_v<T, stmt::While>) {
          collect_assigned(x.body, out);
        }
      },
      s.node());
}

void collect_mentioned(const Stmt& s, VarSet& out) {
  auto add = [&](const Expr& e) {
    auto fv = free_vars(e);
    out.insert(fv.begin(), fv.end());
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, stmt::Assign>) {
          out.insert(x.target);
          add(x.rhs);
        } else if constexpr (std::is_same_v<T, stmt::Seq>) {
          collect_mentioned(x.first, out);
          collect_mentioned(x.second, out);
        } else if constexpr (std::is_same_v<T, stmt::If>) {
          add(x.cond);
          collect_mentioned(x.then_branch, out);
          collect_mentioned(x.else_branch, out);
        } else if constexpr (std::is_same_v<T, stmt::Block>) {
          out.insert(x.locals.begin(), x.locals.end());
          collect_mentioned(x.body, out);
        } else if constexpr (std::is_same_v<T, stmt::While>) {
          add(x.cond);
          if (x.invariant) add(*x.invariant);
          if (x.post) add(*x.post);
          collect_mentioned(x.body, out);
        }
      },
      s.node());
}

// Definite-assignment walk: `defined` holds variables written on every path so far.
void collect_exposed(const Stmt& s, VarSet& defined, VarSet& exposed) {
  auto use = [&](const Expr& e) {
    for (const auto& v : free_vars(e))
      if (!defined.count(v)) exposed.insert(v);
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, stmt::Assign>) {
          use(x.rhs);
          defined.insert(x.target);
        } else if constexpr (std::is_same_v<T, stmt::Seq>) {
          collect_exposed(x.first, defined, exposed);
          collect_exposed(x.second, defined, exposed);
        } else if constexpr (std::is_same_v<T, stmt::If>) {
          use(x.cond);
          VarSet a = defined, b = defined;
          collect_exposed(x.then_branch, a, exposed);
          collect_exposed(x.else_branch, b, exposed);
          VarSet both;
          for (const auto& v : a)
            if (b.count(v)) both.insert(v);
          defined = std::move(both);
        } else if constexpr (std::is_same_v<T, stmt::Block>) {
          VarSet inner = defined;
          // Locals start at zero, so they are never upward-exposed.
          inner.insert(x.locals.begin(), x.locals.end());
          collect_exposed(x.body, inner, exposed);
          for (const auto& v : inner) {
            bool is_local = false;
            for (const auto& l : x.locals) is_local = is_local || l == v;
            if (!is_local) defined.insert(v);
          }
        } else if constexpr (std::is_same_v<T, stmt::While>) {
          use(x.cond);
          VarSet body_defined = defined;
          collect_exposed(x.body, body_defined, exposed);
          if (x.post) use(*x.post);
        }
      },
      s.node());
}

void collect_loops(const Stmt& s, std::vector<Stmt>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, stmt::Seq>) {
          collect_loops(x.first, out);
          collect_loops(x.second, out);
        } else if constexpr (std::is_same_v<T, stmt::If>) {
          collect_loops(x.then_branch, out);
          collect_loops(x.else_branch, out);
        } else if constexpr (std::is_same_v<T, stmt::Block>) {
          collect_loops(x.body, out);
        } else if constexpr (std::is_same_v<T, stmt::While>) {
          collect_loops(x.body, out);
          out.push_back(s);
        }
      },
      s.node());
}

}  // namespace

VarSet assigned_vars(const Stmt& s) {
  VarSet out;
  collect_assigned(s, out);
  return out;
}

VarSet program_vars(const Stmt& s) {
  VarSet out;
  collect_mentioned(s, out);
  return out;
}

VarSet program_vars(const Triple& t) {
  VarSet out = program_vars(t.program);
  for (const auto& e : {t.pre, t.post}) {
    auto fv = free_vars(e);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

VarSet input_vars(const Triple& t) {
  VarSet exposed = free_vars(t.pre);
  VarSet defined;
  collect_exposed(t.program, defined, exposed);
  for (const auto& v : free_vars(t.post))
    if (!defined.count(v)) exposed.insert(v);
  return exposed;
}

std::vector<Stmt> loops_innermost_first(const Stmt& s) {
  std::vector<Stmt> out;
  collect_loops(s, out);
  return out;
}

std::vector<Stmt> flatten_seq(const Stmt& s) {
  std::vector<Stmt> out;
  if (auto* q = s.as<stmt::Seq>()) {
    auto a = flatten_seq(q->first);
    auto b = flatten_seq(q->second);
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
  } else {
    out.push_back(s);
  }
  return out;
}

Stmt replace_loop(const Stmt& s, const void* loop_id, const Stmt& replacement) {
  if (s.id() == loop_id) return replacement;
  // Untouched subtrees keep their identity.
  auto same = [](const Stmt& a, const Stmt& b) { return a.id() == b.id(); };
  return std::visit(
      [&](const auto& x) -> Stmt {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, stmt::Seq>) {
          Stmt a = replace_loop(x.first, loop_id, replacement);
          Stmt b = replace_loop(x.second, loop_id, replacement);
          return same(a, x.first) && same(b, x.second) ? s : seq(a, b);
        } else if constexpr (std::is_same_v<T, stmt::If>) {
          Stmt a = replace_loop(x.then_branch, loop_id, replacement);
          Stmt b = replace_loop(x.else_branch, loop_id, replacement);
          return same(a, x.then_branch) && same(b, x.else_branch) ? s : if_then_else(x.cond, a, b);
        } else if constexpr (std::is_same_v<T, stmt::Block>) {
          Stmt a = replace_loop(x.body, loop_id, replacement);
          return same(a, x.body) ? s : block(x.locals, a);
        } else if constexpr (std::is_same_v<T, stmt::While>) {
          Stmt a = replace_loop(x.body, loop_id, replacement);
          return same(a, x.body) ? s : while_loop(x.cond, a, x.invariant, x.post, x.loc);
        } else {
          return s;
        }
      },
      s.node());
}

bool is_loop_free(const Stmt& s) { return loops_innermost_first(s).empty(); }

}  // namespace loopinv
