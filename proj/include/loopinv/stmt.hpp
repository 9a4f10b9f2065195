#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "loopinv/expr.hpp"

namespace loopinv {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

class Stmt;

namespace stmt {
struct Skip {};
struct Assign { std::string target; Expr rhs; };
struct Seq;
struct If;
struct Block;
struct While;
}  // namespace stmt

/// Immutable imperative statement; copies share structure.
class Stmt {
 public:
  using Node = std::variant<stmt::Skip, stmt::Assign, stmt::Seq, stmt::If, stmt::Block, stmt::While>;

  Stmt();  // SKIP

  const Node& node() const;
  template <class T>
  const T* as() const;
  template <class T>
  bool is() const;

  /// Identity of the underlying node; loops are tracked by it across passes.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Stmt& a, const Stmt& b);
  friend bool operator!=(const Stmt& a, const Stmt& b) { return !(a == b); }

 private:
  explicit Stmt(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend Stmt make_stmt(Node n);
};

namespace stmt {
struct Seq { Stmt first; Stmt second; };
struct If { Expr cond; Stmt then_branch; Stmt else_branch; };
struct Block { std::vector<std::string> locals; Stmt body; };
struct While {
  Expr cond;
  std::optional<Expr> invariant;
  Stmt body;
  /// Programmer-supplied assertion written right after the loop.
  std::optional<Expr> post;
  SourceLoc loc;
};
}  // namespace stmt

inline const Stmt::Node& Stmt::node() const { return *node_; }
template <class T>
const T* Stmt::as() const { return std::get_if<T>(node_.get()); }
template <class T>
bool Stmt::is() const { return std::holds_alternative<T>(*node_); }

Stmt make_stmt(Stmt::Node n);

Stmt skip();
Stmt assign(std::string target, Expr rhs);
Stmt seq(Stmt first, Stmt second);
/// Right-nested sequence; empty gives SKIP.
Stmt seq(const std::vector<Stmt>& parts);
Stmt if_then_else(Expr cond, Stmt then_branch, Stmt else_branch);
Stmt block(std::vector<std::string> locals, Stmt body);
Stmt while_loop(Expr cond, Stmt body, std::optional<Expr> invariant = std::nullopt,
                std::optional<Expr> post = std::nullopt, SourceLoc loc = {});

struct Triple {
  Expr pre;
  Stmt program;
  Expr post;
};

/// Variables assigned anywhere in s (block locals included).
VarSet assigned_vars(const Stmt& s);
/// Every variable mentioned by s, including conditions and annotations.
VarSet program_vars(const Stmt& s);
VarSet program_vars(const Triple& t);
/// Variables that may be read before being written on some path (upward-exposed uses).
VarSet input_vars(const Triple& t);

/// Loops of s in post-order: inner loops come before the loops that contain them.
std::vector<Stmt> loops_innermost_first(const Stmt& s);

/// Flatten nested Seq nodes into their statement list.
std::vector<Stmt> flatten_seq(const Stmt& s);

/// Rebuild s with the loop whose id() is `loop_id` replaced by `replacement`.
Stmt replace_loop(const Stmt& s, const void* loop_id, const Stmt& replacement);

/// Straight-line and loop-free check (no While anywhere).
bool is_loop_free(const Stmt& s);

}  // namespace loopinv
