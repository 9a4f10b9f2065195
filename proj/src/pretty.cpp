#include <sstream>

#include "loopinv/parser.hpp"

namespace loopinv {

namespace {

constexpr int kImplies = 1;
constexpr int kOr = 2;
constexpr int kAnd = 3;
constexpr int kRelation = 4;
constexpr int kAtom = 9;

int level(const Expr& e) {
  auto* o = e.as<node::Op>();
  if (o == nullptr) return kAtom;
  switch (o->op) {
    case OpKind::Implies: return kImplies;
    case OpKind::Or: return kOr;
    case OpKind::And: return kAnd;
    case OpKind::Not: return 8;
    default: return is_relation(o->op) ? kRelation : 5;
  }
}

void print(std::ostream& os, const Expr& e);

void print_at(std::ostream& os, const Expr& e, bool parens) {
  if (parens) os << '(';
  print(os, e);
  if (parens) os << ')';
}

bool is_binary_arith(const Expr& e) {
  auto* o = e.as<node::Op>();
  return o != nullptr && is_arith(o->op);
}

void print_op(std::ostream& os, const node::Op& o) {
  const Expr& a = o.args[0];
  if (o.op == OpKind::Not) {
    os << "¬";
    print_at(os, a, level(a) < 8);
    return;
  }
  const Expr& b = o.args[1];
  if (is_arith(o.op)) {
    print_at(os, a, is_binary_arith(a) || level(a) < 5);
    os << symbol(o.op);
    print_at(os, b, is_binary_arith(b) || level(b) < 5);
  } else if (is_relation(o.op)) {
    print_at(os, a, level(a) <= kRelation);
    os << symbol(o.op);
    print_at(os, b, level(b) <= kRelation);
  } else if (o.op == OpKind::Implies) {
    print_at(os, a, level(a) <= kImplies);
    os << " ⇒ ";
    print_at(os, b, level(b) < kImplies);
  } else {
    const int own = o.op == OpKind::And ? kAnd : kOr;
    print_at(os, a, level(a) < own);
    os << ' ' << symbol(o.op) << ' ';
    print_at(os, b, level(b) <= own);
  }
}

void print(std::ostream& os, const Expr& e) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Var>) {
          os << x.name;
        } else if constexpr (std::is_same_v<T, node::Num>) {
          os << x.value;
        } else if constexpr (std::is_same_v<T, node::Ctor>) {
          switch (x.kind) {
            case CtorKind::True: os << "True"; break;
            case CtorKind::False: os << "False"; break;
            case CtorKind::Zero: os << "0"; break;
            case CtorKind::Succ:
              os << "Succ(";
              print(os, x.args[0]);
              os << ')';
              break;
          }
        } else if constexpr (std::is_same_v<T, node::Op>) {
          print_op(os, x);
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          os << "(λ.";
          print(os, x.body);
          os << ')';
        } else if constexpr (std::is_same_v<T, node::BoundVar>) {
          os << '#' << x.index;
        } else if constexpr (std::is_same_v<T, node::Call>) {
          os << x.name;
        } else if constexpr (std::is_same_v<T, node::App>) {
          os << '(';
          print(os, x.fun);
          os << ' ';
          print(os, x.arg);
          os << ')';
        } else if constexpr (std::is_same_v<T, node::Case>) {
          os << "(case ";
          print(os, x.scrutinee);
          os << " of";
          for (const auto& b : x.branches) {
            os << ' ' << b.ctor << '/' << b.arity << " → ";
            print(os, b.body);
            os << ';';
          }
          os << ')';
        } else {
          os << '(';
          print(os, x.main);
          os << " where";
          for (const auto& [name, def] : x.defs) {
            os << ' ' << name << " = ";
            print(os, def);
            os << ';';
          }
          os << ')';
        }
      },
      e.node());
}

bool is_simple(const Stmt& s) { return !s.is<stmt::Seq>(); }

void print_stmt(std::ostream& os, const Stmt& s, int indent);

void newline(std::ostream& os, int indent) {
  os << '\n';
  for (int i = 0; i < indent; ++i) os << ' ';
}

void print_branch(std::ostream& os, const Stmt& s, int indent) {
  if (is_simple(s)) {
    print_stmt(os, s, indent);
    return;
  }
  os << "BEGIN";
  newline(os, indent + 3);
  print_stmt(os, s, indent + 3);
  newline(os, indent);
  os << "END";
}

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, stmt::Skip>) {
          os << "SKIP";
        } else if constexpr (std::is_same_v<T, stmt::Assign>) {
          os << x.target << ":=" << pretty(x.rhs);
        } else if constexpr (std::is_same_v<T, stmt::Seq>) {
          print_stmt(os, x.first, indent);
          os << ';';
          newline(os, indent);
          print_stmt(os, x.second, indent);
        } else if constexpr (std::is_same_v<T, stmt::If>) {
          os << "IF " << pretty(x.cond) << " THEN ";
          print_branch(os, x.then_branch, indent);
          os << " ELSE ";
          print_branch(os, x.else_branch, indent);
        } else if constexpr (std::is_same_v<T, stmt::Block>) {
          os << "BEGIN";
          if (!x.locals.empty()) {
            os << " VAR";
            for (const auto& l : x.locals) os << ' ' << l;
          }
          newline(os, indent + 3);
          print_stmt(os, x.body, indent + 3);
          newline(os, indent);
          os << "END";
        } else {
          os << "WHILE " << pretty(x.cond) << " DO";
          if (x.invariant) os << " {" << pretty(*x.invariant) << "}";
          newline(os, indent + 3);
          print_branch(os, x.body, indent + 3);
          if (x.post) {
            newline(os, indent);
            os << '{' << pretty(*x.post) << '}';
          }
        }
      },
      s.node());
}

}  // namespace

std::string pretty(const Expr& e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

std::string pretty(const Stmt& s, int indent) {
  std::ostringstream os;
  print_stmt(os, s, indent);
  return os.str();
}

std::string pretty(const Triple& t) {
  std::ostringstream os;
  os << '{' << pretty(t.pre) << "}\n" << pretty(t.program) << "\n{" << pretty(t.post) << "}\n";
  return os.str();
}

}  // namespace loopinv
