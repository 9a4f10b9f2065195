#include "loopinv/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace loopinv {

ParseError::ParseError(int line, int column, std::set<std::string> expected, const std::string& message)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << line << ":" << column << ": " << message;
        if (!expected.empty()) {
          os << " (expected ";
          bool first = true;
          for (const auto& e : expected) {
            os << (first ? "" : ", ") << e;
            first = false;
          }
          os << ")";
        }
        return os.str();
      }()),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

SourceFile read_source(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return {path, os.str()};
}

namespace {

enum class Tok {
  Ident, Number, Keyword,
  LBrace, RBrace, LParen, RParen, Semi, Assign,
  Plus, Minus, Star, Slash, Percent, Caret,
  And, Or, Not, Implies,
  Lt, Gt, Le, Ge, Eq, Ne,
  End,
};

struct Token {
  Tok kind;
  std::string text;  // identifier, lowercased keyword, or digits
  int line;
  int column;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"skip", "if", "then", "else", "begin", "var",
                                          "end", "while", "do", "true", "false"};
  return k;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::Number: return "number " + t.text;
    case Tok::Keyword: return "keyword " + t.text;
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t{Tok::End, "", line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += take();
        t.kind = Tok::Number;
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string word;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          word += take();
        std::string lower = word;
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        if (keywords().count(lower)) {
          t.kind = Tok::Keyword;
          t.text = lower;
        } else if (lower != word) {
          throw ParseError(t.line, t.column, {}, "identifiers must be lowercase: '" + word + "'");
        } else {
          t.kind = Tok::Ident;
          t.text = word;
        }
      } else {
        lex_symbol(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char take() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++col_;
    }
    return c;
  }

  bool starts(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void skip_space() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        take();
      } else if (starts("--")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') take();
      } else {
        return;
      }
    }
  }

  void lex_symbol(Token& t) {
    struct Spelling {
      std::string_view text;
      Tok kind;
    };
    // Longest spellings first.
    static const Spelling table[] = {
        {":=", Tok::Assign}, {"=>", Tok::Implies}, {"⇒", Tok::Implies},
        {"<=", Tok::Le},     {">=", Tok::Ge},      {"!=", Tok::Ne},     {"<>", Tok::Ne},
        {"/\\", Tok::And},   {"\\/", Tok::Or},     {"&&", Tok::And},    {"||", Tok::Or},
        {"∧", Tok::And},     {"∨", Tok::Or},       {"¬", Tok::Not},     {"≤", Tok::Le},
        {"≥", Tok::Ge},      {"≠", Tok::Ne},       {"{", Tok::LBrace},  {"}", Tok::RBrace},
        {"(", Tok::LParen},  {")", Tok::RParen},   {";", Tok::Semi},    {"+", Tok::Plus},
        {"-", Tok::Minus},   {"*", Tok::Star},     {"/", Tok::Slash},   {"%", Tok::Percent},
        {"^", Tok::Caret},   {"~", Tok::Not},      {"!", Tok::Not},     {"<", Tok::Lt},
        {">", Tok::Gt},      {"=", Tok::Eq},
    };
    for (const auto& s : table) {
      if (starts(s.text)) {
        for (std::size_t i = 0; i < s.text.size(); ++i) t.text += take();
        t.kind = s.kind;
        return;
      }
    }
    throw ParseError(t.line, t.column, {}, std::string("unexpected character '") + src_[pos_] + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  Triple program() {
    Expr pre = assertion();
    Stmt body = sequence();
    Expr post = assertion();
    expect_end();
    return {pre, body, post};
  }

  Expr standalone_expr() {
    const Token start = peek();
    Expr e = expr();
    expect_end();
    if (!infer_sort(e)) throw ParseError(start.line, start.column, {}, "ill-sorted expression");
    return e;
  }

  Stmt standalone_stmt() {
    Stmt s = sequence();
    expect_end();
    return s;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_keyword(std::string_view kw) const { return peek().kind == Tok::Keyword && peek().text == kw; }
  Token advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    const Token& t = peek();
    throw ParseError(t.line, t.column, std::move(expected), "unexpected " + describe(t));
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail({what});
    return advance();
  }

  void expect_keyword(const std::string& kw) {
    if (!at_keyword(kw)) fail({kw});
    advance();
  }

  void expect_end() {
    if (!at(Tok::End)) fail({"end of input"});
  }

  Expr typed(Expr e, Sort want, const Token& where) {
    auto s = infer_sort(e);
    if (s != want) {
      throw ParseError(where.line, where.column, {},
                       std::string("expected a ") + (want == Sort::Bool ? "boolean" : "natural number") +
                           " expression");
    }
    return e;
  }

  Expr assertion() {
    expect(Tok::LBrace, "'{'");
    const Token start = peek();
    Expr e = typed(expr(), Sort::Bool, start);
    expect(Tok::RBrace, "'}'");
    return e;
  }

  Stmt sequence() {
    std::vector<Stmt> parts{simple()};
    while (at(Tok::Semi)) {
      advance();
      parts.push_back(simple());
    }
    return seq(parts);
  }

  static const std::set<std::string>& statement_starts() {
    static const std::set<std::string> s = {"SKIP", "identifier", "IF", "BEGIN", "WHILE"};
    return s;
  }

  Stmt simple() {
    const Token& t = peek();
    if (at_keyword("skip")) {
      advance();
      return skip();
    }
    if (at(Tok::Ident)) {
      std::string target = advance().text;
      expect(Tok::Assign, "':='");
      const Token start = peek();
      return assign(std::move(target), typed(expr(), Sort::Nat, start));
    }
    if (at_keyword("if")) {
      advance();
      const Token start = peek();
      Expr cond = typed(expr(), Sort::Bool, start);
      expect_keyword("then");
      Stmt then_branch = simple();
      Stmt else_branch = skip();
      if (at_keyword("else")) {
        advance();
        else_branch = simple();
      }
      return if_then_else(std::move(cond), std::move(then_branch), std::move(else_branch));
    }
    if (at_keyword("begin")) {
      advance();
      std::vector<std::string> locals;
      if (at_keyword("var")) {
        advance();
        // The list ends where the first statement `v := e` begins.
        while (at(Tok::Ident) && !(pos_ + 1 < toks_.size() && toks_[pos_ + 1].kind == Tok::Assign))
          locals.push_back(advance().text);
        if (locals.empty()) fail({"identifier"});
      }
      Stmt body = sequence();
      expect_keyword("end");
      return block(std::move(locals), std::move(body));
    }
    if (at_keyword("while")) {
      const SourceLoc loc{t.line, t.column};
      advance();
      const Token start = peek();
      Expr cond = typed(expr(), Sort::Bool, start);
      expect_keyword("do");
      std::optional<Expr> inv;
      if (at(Tok::LBrace)) inv = assertion();
      Stmt body = simple();
      // `{Q}` after a loop is its postcondition unless it closes the whole program.
      std::optional<Expr> post;
      if (at(Tok::LBrace)) {
        const std::size_t mark = pos_;
        Expr q = assertion();
        if (at(Tok::End)) {
          pos_ = mark;
        } else {
          post = q;
        }
      }
      return while_loop(std::move(cond), std::move(body), std::move(inv), std::move(post), loc);
    }
    fail(statement_starts());
  }

  // Expression levels, loosest first.
  Expr expr() { return implication(); }

  Expr implication() {
    Expr lhs = disjunction();
    if (at(Tok::Implies)) {
      advance();
      return implies(lhs, implication());
    }
    return lhs;
  }

  Expr disjunction() {
    Expr lhs = conjunction();
    while (at(Tok::Or)) {
      advance();
      lhs = lhs || conjunction();
    }
    return lhs;
  }

  Expr conjunction() {
    Expr lhs = relation();
    while (at(Tok::And)) {
      advance();
      lhs = lhs && relation();
    }
    return lhs;
  }

  Expr relation() {
    Expr lhs = additive();
    static const std::pair<Tok, OpKind> rels[] = {{Tok::Lt, OpKind::Lt}, {Tok::Gt, OpKind::Gt},
                                                  {Tok::Le, OpKind::Le}, {Tok::Ge, OpKind::Ge},
                                                  {Tok::Eq, OpKind::Eq}, {Tok::Ne, OpKind::Ne}};
    for (const auto& [tok, kind] : rels) {
      if (at(tok)) {
        advance();
        return op(kind, lhs, additive());
      }
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = multiplicative();
    for (;;) {
      if (at(Tok::Plus)) {
        advance();
        lhs = lhs + multiplicative();
      } else if (at(Tok::Minus)) {
        advance();
        lhs = lhs - multiplicative();
      } else {
        return lhs;
      }
    }
  }

  Expr multiplicative() {
    Expr lhs = power();
    for (;;) {
      if (at(Tok::Star)) {
        advance();
        lhs = lhs * power();
      } else if (at(Tok::Slash)) {
        advance();
        lhs = lhs / power();
      } else if (at(Tok::Percent)) {
        advance();
        lhs = lhs % power();
      } else {
        return lhs;
      }
    }
  }

  Expr power() {
    Expr lhs = unary();
    while (at(Tok::Caret)) {
      advance();
      lhs = lhs ^ unary();
    }
    return lhs;
  }

  Expr unary() {
    if (at(Tok::Not)) {
      advance();
      return !unary();
    }
    return primary();
  }

  Expr primary() {
    const Token& t = peek();
    if (at(Tok::Ident)) return var(advance().text);
    if (at(Tok::Number)) {
      std::uint64_t v = 0;
      for (char c : t.text) {
        const std::uint64_t d = static_cast<std::uint64_t>(c - '0');
        if (v > (UINT64_MAX - d) / 10) throw ParseError(t.line, t.column, {}, "numeral too large");
        v = v * 10 + d;
      }
      advance();
      return num(v);
    }
    if (at_keyword("true")) {
      advance();
      return truth(true);
    }
    if (at_keyword("false")) {
      advance();
      return truth(false);
    }
    if (at(Tok::LParen)) {
      advance();
      Expr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    fail({"identifier", "number", "TRUE", "FALSE", "'('", "'¬'"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Triple parse_program(std::string_view text) { return Parser(text).program(); }
Expr parse_expr(std::string_view text) { return Parser(text).standalone_expr(); }
Stmt parse_stmt(std::string_view text) { return Parser(text).standalone_stmt(); }

}  // namespace loopinv
