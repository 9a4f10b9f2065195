#include "loopinv/evaluator.hpp"

#include <sstream>
#include <stdexcept>

namespace loopinv {

std::string format_store(const Store& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [k, v] : s) {
    os << (first ? "" : ", ") << k << ':' << v;
    first = false;
  }
  os << '}';
  return os.str();
}

const char* to_string(EvalErrorKind k) {
  switch (k) {
    case EvalErrorKind::DivByZero: return "DivByZero";
    case EvalErrorKind::UnboundVar: return "UnboundVar";
    case EvalErrorKind::Overflow: return "Overflow";
    case EvalErrorKind::NotProgram: return "NotProgram";
  }
  return "?";
}

bool apply_arith(OpKind op, std::uint64_t a, std::uint64_t b, DivMode mode, std::uint64_t& out,
                 EvalErrorKind& err) {
  switch (op) {
    case OpKind::Add:
      if (__builtin_add_overflow(a, b, &out)) {
        err = EvalErrorKind::Overflow;
        return false;
      }
      return true;
    case OpKind::Sub:
      out = a > b ? a - b : 0;
      return true;
    case OpKind::Mul:
      if (__builtin_mul_overflow(a, b, &out)) {
        err = EvalErrorKind::Overflow;
        return false;
      }
      return true;
    case OpKind::Div:
    case OpKind::Mod:
      if (b == 0) {
        if (mode == DivMode::Strict) {
          err = EvalErrorKind::DivByZero;
          return false;
        }
        out = op == OpKind::Div ? 0 : a;
        return true;
      }
      out = op == OpKind::Div ? a / b : a % b;
      return true;
    case OpKind::Pow: {
      std::uint64_t result = 1;
      std::uint64_t base = a;
      std::uint64_t e = b;
      // 0^e and 1^e never overflow, whatever e is.
      if (a <= 1) {
        out = (a == 0 && b > 0) ? 0 : 1;
        return true;
      }
      while (e > 0) {
        if (e & 1) {
          if (__builtin_mul_overflow(result, base, &result)) {
            err = EvalErrorKind::Overflow;
            return false;
          }
        }
        e >>= 1;
        if (e > 0 && __builtin_mul_overflow(base, base, &base)) {
          err = EvalErrorKind::Overflow;
          return false;
        }
      }
      out = result;
      return true;
    }
    default:
      err = EvalErrorKind::NotProgram;
      return false;
  }
}

bool apply_relation(OpKind op, std::uint64_t a, std::uint64_t b) {
  switch (op) {
    case OpKind::Lt: return a < b;
    case OpKind::Gt: return a > b;
    case OpKind::Le: return a <= b;
    case OpKind::Ge: return a >= b;
    case OpKind::Eq: return a == b;
    case OpKind::Ne: return a != b;
    default: return false;
  }
}

namespace {

EvalResult error(EvalErrorKind k, std::string detail = {}) { return EvalError{k, std::move(detail)}; }

EvalResult eval(const Expr& e, const Store& s, DivMode mode) {
  if (auto* v = e.as<node::Var>()) {
    auto it = s.find(v->name);
    if (it == s.end()) return error(EvalErrorKind::UnboundVar, v->name);
    return Value::of_nat(it->second);
  }
  if (auto* n = e.as<node::Num>()) return Value::of_nat(n->value);
  if (auto* c = e.as<node::Ctor>()) {
    switch (c->kind) {
      case CtorKind::True: return Value::of_bool(true);
      case CtorKind::False: return Value::of_bool(false);
      case CtorKind::Zero: return Value::of_nat(0);
      case CtorKind::Succ: {
        auto r = eval(c->args[0], s, mode);
        if (std::holds_alternative<EvalError>(r)) return r;
        const auto v = std::get<Value>(r).nat;
        if (v == UINT64_MAX) return error(EvalErrorKind::Overflow);
        return Value::of_nat(v + 1);
      }
    }
  }
  auto* o = e.as<node::Op>();
  if (o == nullptr) return error(EvalErrorKind::NotProgram);
  auto first = eval(o->args[0], s, mode);
  if (std::holds_alternative<EvalError>(first)) return first;
  const Value a = std::get<Value>(first);
  switch (o->op) {
    case OpKind::Not: return Value::of_bool(!a.boolean);
    case OpKind::And:
      if (!a.boolean) return a;
      return eval(o->args[1], s, mode);
    case OpKind::Or:
      if (a.boolean) return a;
      return eval(o->args[1], s, mode);
    case OpKind::Implies:
      if (!a.boolean) return Value::of_bool(true);
      return eval(o->args[1], s, mode);
    default: break;
  }
  auto second = eval(o->args[1], s, mode);
  if (std::holds_alternative<EvalError>(second)) return second;
  const Value b = std::get<Value>(second);
  if (is_relation(o->op)) return Value::of_bool(apply_relation(o->op, a.nat, b.nat));
  std::uint64_t out = 0;
  EvalErrorKind err{};
  if (!apply_arith(o->op, a.nat, b.nat, mode, out, err)) return error(err);
  return Value::of_nat(out);
}

struct Exec {
  std::uint64_t fuel;
  const LoopObserver& observer;
  std::optional<EvalError> failure;
  bool exhausted = false;

  bool cond(const Expr& c, const Store& s, bool& out) {
    auto r = eval(c, s, DivMode::Strict);
    if (auto* err = std::get_if<EvalError>(&r)) {
      failure = *err;
      return false;
    }
    out = std::get<Value>(r).boolean;
    return true;
  }

  // Returns false when execution stops early (error or fuel).
  bool run(const Stmt& st, Store& s) {
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, stmt::Skip>) {
            return true;
          } else if constexpr (std::is_same_v<T, stmt::Assign>) {
            auto r = eval(x.rhs, s, DivMode::Strict);
            if (auto* err = std::get_if<EvalError>(&r)) {
              failure = *err;
              return false;
            }
            s[x.target] = std::get<Value>(r).nat;
            return true;
          } else if constexpr (std::is_same_v<T, stmt::Seq>) {
            return run(x.first, s) && run(x.second, s);
          } else if constexpr (std::is_same_v<T, stmt::If>) {
            bool b = false;
            if (!cond(x.cond, s, b)) return false;
            return run(b ? x.then_branch : x.else_branch, s);
          } else if constexpr (std::is_same_v<T, stmt::Block>) {
            std::map<std::string, std::optional<std::uint64_t>> saved;
            for (const auto& l : x.locals) {
              auto it = s.find(l);
              saved[l] = it == s.end() ? std::nullopt : std::optional<std::uint64_t>(it->second);
              s[l] = 0;
            }
            const bool ok = run(x.body, s);
            for (const auto& [l, v] : saved) {
              if (v) s[l] = *v;
              else s.erase(l);
            }
            return ok;
          } else {
            bool arrival = true;
            for (;;) {
              if (observer) observer(st, s, arrival);
              arrival = false;
              bool b = false;
              if (!cond(x.cond, s, b)) return false;
              if (!b) return true;
              if (fuel == 0) {
                exhausted = true;
                return false;
              }
              --fuel;
              if (!run(x.body, s)) return false;
            }
          }
        },
        st.node());
  }
};

}  // namespace

EvalResult eval_expr(const Expr& e, const Store& s, DivMode mode) { return eval(e, s, mode); }

bool holds(const Expr& e, const Store& s, bool* errored, DivMode mode) {
  auto r = eval(e, s, mode);
  if (errored) *errored = std::holds_alternative<EvalError>(r);
  if (auto* v = std::get_if<Value>(&r)) return v->sort == Sort::Bool && v->boolean;
  return false;
}

ExecOutcome exec(const Stmt& st, const Store& s, std::uint64_t fuel, const LoopObserver& observer) {
  Exec run{fuel, observer, std::nullopt};
  ExecOutcome out;
  out.store = s;
  if (run.run(st, out.store)) return out;
  if (run.exhausted) {
    out.kind = ExecOutcome::Kind::FuelExhausted;
  } else {
    out.kind = ExecOutcome::Kind::Error;
    out.error = run.failure;
  }
  return out;
}

CompiledExpr CompiledExpr::compile(const Expr& e, const std::vector<std::string>& slots) {
  CompiledExpr c;
  c.emit(e, slots);
  return c;
}

void CompiledExpr::emit(const Expr& e, const std::vector<std::string>& slots) {
  if (auto* v = e.as<node::Var>()) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i] == v->name) {
        code_.push_back({Code::Slot, OpKind::Add, i});
        return;
      }
    }
    throw std::invalid_argument("no slot for variable " + v->name);
  }
  if (auto* n = e.as<node::Num>()) {
    code_.push_back({Code::Lit, OpKind::Add, n->value});
    return;
  }
  if (auto* c = e.as<node::Ctor>()) {
    switch (c->kind) {
      case CtorKind::True: code_.push_back({Code::Lit, OpKind::Add, 1}); return;
      case CtorKind::False:
      case CtorKind::Zero: code_.push_back({Code::Lit, OpKind::Add, 0}); return;
      case CtorKind::Succ:
        emit(c->args[0], slots);
        code_.push_back({Code::Lit, OpKind::Add, 1});
        code_.push_back({Code::Arith, OpKind::Add, 0});
        return;
    }
  }
  auto* o = e.as<node::Op>();
  if (o == nullptr) throw std::invalid_argument("not a program expression");
  emit(o->args[0], slots);
  auto jump_over_second = [&](Code jump) {
    const std::size_t at = code_.size();
    code_.push_back({jump, OpKind::Add, 0});
    emit(o->args[1], slots);
    code_[at].arg = code_.size();
  };
  switch (o->op) {
    case OpKind::Not: code_.push_back({Code::Not, OpKind::Not, 0}); return;
    case OpKind::And: jump_over_second(Code::JumpIfFalse); return;
    case OpKind::Or: jump_over_second(Code::JumpIfTrue); return;
    case OpKind::Implies:
      code_.push_back({Code::Not, OpKind::Not, 0});
      jump_over_second(Code::JumpIfTrue);
      return;
    default: break;
  }
  emit(o->args[1], slots);
  code_.push_back({is_relation(o->op) ? Code::Rel : Code::Arith, o->op, 0});
}

bool CompiledExpr::eval(const std::uint64_t* slots, std::uint64_t& out, DivMode mode,
                        EvalErrorKind* err) const {
  std::uint64_t stack[64];
  std::vector<std::uint64_t> big;
  std::uint64_t* sp = stack;
  if (code_.size() > 64) {
    big.resize(code_.size());
    sp = big.data();
  }
  std::uint64_t* const base = sp;
  for (std::size_t pc = 0; pc < code_.size();) {
    const Instr& in = code_[pc];
    switch (in.code) {
      case Code::Slot: *sp++ = slots[in.arg]; ++pc; break;
      case Code::Lit: *sp++ = in.arg; ++pc; break;
      case Code::Not: sp[-1] = sp[-1] ? 0 : 1; ++pc; break;
      case Code::Rel:
        --sp;
        sp[-1] = apply_relation(in.op, sp[-1], sp[0]) ? 1 : 0;
        ++pc;
        break;
      case Code::Arith: {
        --sp;
        EvalErrorKind k{};
        if (!apply_arith(in.op, sp[-1], sp[0], mode, sp[-1], k)) {
          if (err) *err = k;
          return false;
        }
        ++pc;
        break;
      }
      case Code::JumpIfFalse:
        if (sp[-1] == 0) {
          pc = in.arg;
        } else {
          --sp;
          ++pc;
        }
        break;
      case Code::JumpIfTrue:
        if (sp[-1] != 0) {
          sp[-1] = 1;
          pc = in.arg;
        } else {
          --sp;
          ++pc;
        }
        break;
    }
  }
  out = sp > base ? sp[-1] : 0;
  return true;
}

}  // namespace loopinv
