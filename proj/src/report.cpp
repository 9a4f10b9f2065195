#include "loopinv/report.hpp"

#include <sstream>

#include "json.hpp"
#include "loopinv/parser.hpp"

namespace loopinv {

using nlohmann::json;

namespace {

bool solved(const InvariantReport& r) {
  return !r.engine_failure && r.verdict.status == Verdict::Status::VerifiedUpToBound;
}

std::string subst_text(const Subst& s) {
  std::string out;
  for (const auto& [g, e] : s) out += (out.empty() ? "" : ", ") + g + " := " + pretty(e);
  return out.empty() ? "-" : out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
  return out;
}

std::string verdict_text(const Verdict& v, const SolverConfig& cfg) {
  std::string s = to_string(v.status);
  if (v.status == Verdict::Status::VerifiedUpToBound) return s + " (domain bound " + std::to_string(cfg.domain_bound) + ")";
  if (v.requirement) s += " at requirement " + std::to_string(v.requirement);
  if (!v.counterexample.empty()) s += " on " + format_store(v.counterexample);
  if (!v.note.empty()) s += ": " + v.note;
  return s;
}

json subst_json(const Subst& s) {
  json j = json::object();
  for (const auto& [g, e] : s) j[g] = pretty(e);
  return j;
}

json verdict_json(const Verdict& v) {
  json store = json::object();
  for (const auto& [k, x] : v.counterexample) store[k] = x;
  return {{"status", to_string(v.status)},
          {"requirement", v.requirement},
          {"counterexample", store},
          {"note", v.note}};
}

json trace_json(const DerivationTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"kind", to_string(s.kind)},
                     {"formula", pretty(s.formula)},
                     {"note", s.note},
                     {"partner", s.partner ? json(pretty(*s.partner)) : json(nullptr)}});
  }
  return steps;
}

}  // namespace

int exit_code(const ProgramReport& r, Mode mode) {
  int code = 0;
  for (const auto& l : r.loops) {
    if (solved(l)) continue;
    const bool failed = !l.engine_failure && l.verdict.status == Verdict::Status::Failed;
    if (mode == Mode::Verify || failed)
      code = std::max(code, 1);
    else
      code = 2;
  }
  if (r.triple && r.triple->status != Verdict::Status::VerifiedUpToBound) code = std::max(code, 1);
  return code;
}

std::vector<std::string> warnings(const ProgramReport& r) {
  std::vector<std::string> out;
  for (const auto& l : r.loops)
    for (const auto& v : l.lost_variables)
      out.push_back("variable " + v + " updated in loop body but absent from invariant (line " +
                    std::to_string(l.location.line) +
                    "); keeping it in the left operand of binary operations may help");
  return out;
}

std::string render_text(const ProgramReport& r, Mode mode, const SolverConfig& cfg) {
  std::ostringstream out;
  if (r.loops.empty()) out << "no loops\n";
  for (const auto& l : r.loops) {
    out << "loop at line " << l.location.line << ", column " << l.location.column << "\n";
    if (mode == Mode::Trace && l.trace) {
      int n = 0;
      for (const auto& s : l.trace->steps)
        out << "  (" << ++n << ") " << pretty(s.formula) << "    [" << to_string(s.kind) << ": " << s.note << "]\n";
    }
    if (l.engine_failure) out << "  engine: " << to_string(*l.engine_failure) << "\n";
    out << "  postcondition: " << pretty(l.post) << "\n";
    out << "  invariant: " << pretty(l.invariant) << "\n";
    if (!l.genvars.empty()) out << "  generalisation variables: " << join({l.genvars.begin(), l.genvars.end()}) << "\n";
    if (l.assignment && !l.genvars.empty()) {
      const auto& a = *l.assignment;
      out << "  initial: " << subst_text(a.initial) << "\n";
      if (a.step_condition) {
        out << "  step if " << pretty(*a.step_condition) << ": " << subst_text(a.step) << "\n";
        out << "  step otherwise: " << subst_text(a.step_otherwise) << "\n";
      } else {
        out << "  step: " << subst_text(a.step) << "\n";
      }
      out << "  final: " << subst_text(a.final) << "\n";
    }
    out << "  verdict: " << (l.engine_failure ? l.verdict.note : verdict_text(l.verdict, cfg)) << "\n";
    out << "  stats: " << l.stats.candidates_tried << " candidates, " << l.stats.stores_tested << " stores\n";
  }
  if (r.triple) out << "triple: " << verdict_text(*r.triple, cfg) << "\n";
  if (mode != Mode::Verify && !r.loops.empty()) out << "annotated program:\n" << pretty(r.annotated);
  return out.str();
}

std::string render_json(const ProgramReport& r, Mode mode) {
  json loops = json::array();
  for (const auto& l : r.loops) {
    json assignment = nullptr;
    if (l.assignment) {
      const auto& a = *l.assignment;
      assignment = {{"initial", subst_json(a.initial)},
                    {"step", subst_json(a.step)},
                    {"step_condition", a.step_condition ? json(pretty(*a.step_condition)) : json(nullptr)},
                    {"step_otherwise", subst_json(a.step_otherwise)},
                    {"final", subst_json(a.final)}};
    }
    loops.push_back({
        {"location", {{"line", l.location.line}, {"column", l.location.column}}},
        {"invariant", pretty(l.invariant)},
        {"postcondition", pretty(l.post)},
        {"genvars", json(std::vector<std::string>(l.genvars.begin(), l.genvars.end()))},
        {"assignment", assignment},
        {"verdict", verdict_json(l.verdict)},
        {"engine_failure", l.engine_failure ? json(to_string(*l.engine_failure)) : json(nullptr)},
        {"lost_variables", l.lost_variables},
        {"stats", {{"candidates_tried", l.stats.candidates_tried}, {"stores_tested", l.stats.stores_tested}}},
        {"trace", l.trace ? trace_json(*l.trace) : json(nullptr)},
    });
  }
  json out = {{"loops", loops}, {"exit_code", exit_code(r, mode)}};
  out["triple"] = r.triple ? verdict_json(*r.triple) : json(nullptr);
  return out.dump(2) + "\n";
}

}  // namespace loopinv
