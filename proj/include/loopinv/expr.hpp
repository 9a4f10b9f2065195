#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace loopinv {

/// Pre-defined operators. Arithmetic ones work on naturals, the rest yield booleans.
enum class OpKind {
  Add, Sub, Mul, Div, Mod, Pow,
  And, Or, Not, Implies,
  Lt, Gt, Le, Ge, Eq, Ne,
};

enum class CtorKind { Zero, Succ, True, False };

enum class Sort { Nat, Bool };

bool is_arith(OpKind op);
bool is_relation(OpKind op);
bool is_logical(OpKind op);
/// +, *, ∧, ∨
bool is_associative(OpKind op);
std::size_t arity(OpKind op);
std::size_t arity(CtorKind c);
const char* symbol(OpKind op);

class Expr;
using Subst = std::map<std::string, Expr>;
using VarSet = std::set<std::string>;

namespace node {
struct Var { std::string name; };
/// Numeral shorthand for Succ^value(Zero).
struct Num { std::uint64_t value; };
/// True/False only; Zero and Succ are canonicalised into Num when possible.
struct Ctor;
struct Op;
struct Lam;
struct BoundVar { std::size_t index; };
struct Call { std::string name; };
struct App;
struct Case;
struct Where;
}  // namespace node

/// Immutable first-order term with de Bruijn binders. Copies share structure.
class Expr {
 public:
  using Node = std::variant<node::Var, node::Num, node::Ctor, node::Op, node::Lam,
                            node::BoundVar, node::Call, node::App, node::Case,
                            node::Where>;

  Expr();  // the literal True

  const Node& node() const;

  template <class T>
  const T* as() const;
  template <class T>
  bool is() const;

  bool is_op(OpKind op) const;
  bool is_true() const;
  bool is_false() const;
  /// Operator arguments; empty for non-operators.
  const std::vector<Expr>& args() const;
  OpKind op() const;  // precondition: is<node::Op>()

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
  /// Total structural order, used for deterministic containers.
  friend bool operator<(const Expr& a, const Expr& b);

  std::size_t size() const;
  /// Identity of the shared node, for memo tables.
  const void* id() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend Expr make(Node n);
};

namespace node {
struct Ctor { CtorKind kind; std::vector<Expr> args; };
struct Op { OpKind op; std::vector<Expr> args; };
struct Lam { Expr body; };
struct App { Expr fun; Expr arg; };
struct CaseBranch {
  std::string ctor;
  std::size_t arity;  // pattern variables bound as de Bruijn slots
  Expr body;
};
struct Case { Expr scrutinee; std::vector<CaseBranch> branches; };
struct Where { Expr main; std::vector<std::pair<std::string, Expr>> defs; };
}  // namespace node

inline const Expr::Node& Expr::node() const { return *node_; }
template <class T>
const T* Expr::as() const { return std::get_if<T>(node_.get()); }
template <class T>
bool Expr::is() const { return std::holds_alternative<T>(*node_); }

Expr make(Expr::Node n);

// Smart constructors. They validate arities and canonicalise numerals.
Expr var(std::string name);
Expr num(std::uint64_t value);
Expr ctor(CtorKind kind, std::vector<Expr> args = {});
Expr op(OpKind kind, std::vector<Expr> args);
Expr op(OpKind kind, Expr a);
Expr op(OpKind kind, Expr a, Expr b);
Expr lam(Expr body);
Expr bound(std::size_t index);
Expr call(std::string name);
Expr app(Expr fun, Expr arg);
Expr case_of(Expr scrutinee, std::vector<node::CaseBranch> branches);
Expr where(Expr main, std::vector<std::pair<std::string, Expr>> defs);
Expr truth(bool value);

inline Expr operator+(Expr a, Expr b) { return op(OpKind::Add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return op(OpKind::Sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return op(OpKind::Mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return op(OpKind::Div, std::move(a), std::move(b)); }
inline Expr operator%(Expr a, Expr b) { return op(OpKind::Mod, std::move(a), std::move(b)); }
inline Expr operator^(Expr a, Expr b) { return op(OpKind::Pow, std::move(a), std::move(b)); }
inline Expr operator&&(Expr a, Expr b) { return op(OpKind::And, std::move(a), std::move(b)); }
inline Expr operator||(Expr a, Expr b) { return op(OpKind::Or, std::move(a), std::move(b)); }
inline Expr operator!(Expr a) { return op(OpKind::Not, std::move(a)); }
inline Expr implies(Expr a, Expr b) { return op(OpKind::Implies, std::move(a), std::move(b)); }
inline Expr lt(Expr a, Expr b) { return op(OpKind::Lt, std::move(a), std::move(b)); }
inline Expr gt(Expr a, Expr b) { return op(OpKind::Gt, std::move(a), std::move(b)); }
inline Expr le(Expr a, Expr b) { return op(OpKind::Le, std::move(a), std::move(b)); }
inline Expr ge(Expr a, Expr b) { return op(OpKind::Ge, std::move(a), std::move(b)); }
inline Expr eq(Expr a, Expr b) { return op(OpKind::Eq, std::move(a), std::move(b)); }
inline Expr ne(Expr a, Expr b) { return op(OpKind::Ne, std::move(a), std::move(b)); }

/// Right-nested conjunction; the empty conjunction is True.
Expr conjoin(const std::vector<Expr>& conjuncts);

/// Simultaneous, capture-free substitution of free variables.
Expr substitute(const Expr& e, const Subst& theta);
VarSet free_vars(const Expr& e);
bool occurs_free(const std::string& name, const Expr& e);
/// Structural identity under the de Bruijn representation.
bool alpha_eq(const Expr& a, const Expr& b);

using Renaming = std::map<std::string, std::string>;
/// Bijection rho on `renameable` names with e1 == e2 rho, if one exists.
std::optional<Renaming> renaming_of(const Expr& e1, const Expr& e2, const VarSet& renameable);

/// Sort of a program-level term, or nullopt when ill-sorted. Variables are naturals.
std::optional<Sort> infer_sort(const Expr& e);
/// Every BoundVar index is below the number of enclosing binders.
bool is_closed_under_binders(const Expr& e);

}  // namespace loopinv
