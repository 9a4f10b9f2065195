#pragma once

#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "loopinv/expr.hpp"
#include "loopinv/stmt.hpp"

namespace loopinv {

/// Raised on malformed or ill-sorted input; carries the position and what would have been accepted.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::set<std::string> expected, const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::set<std::string> expected_;
};

struct SourceFile {
  std::filesystem::path path;
  std::string text;
};

SourceFile read_source(const std::filesystem::path& path);

/// Parses `{P} S {Q}`. Keywords are case-insensitive, `--` starts a line comment.
///
/// Operator precedence, loosest first: ⇒ (right-assoc), ∨, ∧, relations (non-chaining),
/// + -, * / %, ^, ¬ (prefix, binds to a primary). Binary operators other than ⇒ associate
/// to the left. ASCII spellings are accepted: /\ && for ∧, \/ || for ∨, ~ ! for ¬,
/// => for ⇒, <= >= != <> for ≤ ≥ ≠.
Triple parse_program(std::string_view text);
Expr parse_expr(std::string_view text);
Stmt parse_stmt(std::string_view text);

/// Concrete syntax accepted back by the parser. Arithmetic operands that are themselves
/// binary arithmetic are parenthesised: `x+(1+v)`, `(2*v)+1`.
std::string pretty(const Expr& e);
std::string pretty(const Stmt& s, int indent = 0);
std::string pretty(const Triple& t);

}  // namespace loopinv
