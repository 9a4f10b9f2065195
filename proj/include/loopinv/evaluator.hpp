#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "loopinv/expr.hpp"
#include "loopinv/stmt.hpp"

namespace loopinv {

using Store = std::map<std::string, std::uint64_t>;

std::string format_store(const Store& s);

enum class EvalErrorKind { DivByZero, UnboundVar, Overflow, NotProgram };

struct EvalError {
  EvalErrorKind kind;
  std::string detail;
};

const char* to_string(EvalErrorKind k);

/// Strict: `/0` and `%0` are errors. Total: x/0 = 0 and x%0 = x.
enum class DivMode { Strict, Total };

struct Value {
  Sort sort = Sort::Nat;
  std::uint64_t nat = 0;
  bool boolean = false;

  static Value of_nat(std::uint64_t v) { return {Sort::Nat, v, false}; }
  static Value of_bool(bool b) { return {Sort::Bool, 0, b}; }
  friend bool operator==(const Value& a, const Value& b) {
    return a.sort == b.sort && (a.sort == Sort::Nat ? a.nat == b.nat : a.boolean == b.boolean);
  }
};

using EvalResult = std::variant<Value, EvalError>;

/// Monus subtraction, floor division, 0^0 = 1. ∧ ∨ ⇒ short-circuit left to right.
EvalResult eval_expr(const Expr& e, const Store& s, DivMode mode = DivMode::Strict);

/// Truth of a boolean assertion; an evaluation error counts as false and sets *errored.
bool holds(const Expr& e, const Store& s, bool* errored = nullptr, DivMode mode = DivMode::Strict);

/// Checked natural arithmetic shared by both evaluators. Returns false on error.
bool apply_arith(OpKind op, std::uint64_t a, std::uint64_t b, DivMode mode, std::uint64_t& out,
                 EvalErrorKind& err);
bool apply_relation(OpKind op, std::uint64_t a, std::uint64_t b);

struct ExecOutcome {
  enum class Kind { Finished, FuelExhausted, Error };
  Kind kind = Kind::Finished;
  Store store;
  std::optional<EvalError> error;
};

/// Called each time a loop condition is about to be evaluated. `arrival` marks the first
/// evaluation after control reaches the loop.
using LoopObserver = std::function<void(const Stmt& loop, const Store& s, bool arrival)>;

/// Big-step execution. Fuel counts loop-body iterations across the whole run.
ExecOutcome exec(const Stmt& st, const Store& s, std::uint64_t fuel, const LoopObserver& observer = {});

/// Expression compiled against a fixed slot layout, evaluated on a flat array of naturals.
/// Booleans are 0/1. Produces the same results as eval_expr.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  /// Throws std::invalid_argument when e mentions a name outside `slots` or a non-program node.
  static CompiledExpr compile(const Expr& e, const std::vector<std::string>& slots);

  /// False on evaluation error (kind in *err when given).
  bool eval(const std::uint64_t* slots, std::uint64_t& out, DivMode mode,
            EvalErrorKind* err = nullptr) const;

 private:
  enum class Code : std::uint8_t { Slot, Lit, Arith, Rel, Not, JumpIfFalse, JumpIfTrue };
  struct Instr {
    Code code;
    OpKind op;
    std::uint64_t arg;
  };
  void emit(const Expr& e, const std::vector<std::string>& slots);
  std::vector<Instr> code_;
};

}  // namespace loopinv
