#include <cstdlib>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "loopinv/driver.hpp"
#include "loopinv/parser.hpp"
#include "loopinv/report.hpp"

namespace {

const char* kPrecedence =
    "Operator precedence, loosest first: => (right), \\/, /\\, relations (< > <= >= = !=, no chaining),\n"
    "+ -, * / %, ^, ~ (prefix). Other binary operators associate to the left.\n"
    "Subtraction is monus (x-y = 0 when y > x); / and % are floor division on naturals.";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loop invariant discovery by weakest preconditions and generalisation"};
  app.footer(kPrecedence);

  std::string mode_name;
  std::string file;
  std::string format = "text";
  std::string loop_row = "invariant";
  std::vector<std::string> disabled;
  loopinv::DriverConfig cfg;

  app.add_option("mode", mode_name, "discover | verify | trace")
      ->required()
      ->check(CLI::IsMember({"discover", "verify", "trace"}));
  app.add_option("file", file, "program {P} S {Q}")->required();
  app.add_option("--bound", cfg.solver.domain_bound, "input variables range over 0..N")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iter", cfg.engine.max_iterations, "engine iteration budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--refutation-bound", cfg.engine.simp.refutation_bound, "bounded search for infeasible branches")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "text | json")->capture_default_str()->check(CLI::IsMember({"text", "json"}));
  app.add_option("--wlp-loop-row", loop_row, "how inner loops enter wlp: invariant | substitute")
      ->capture_default_str()
      ->check(CLI::IsMember({"invariant", "substitute"}));
  app.add_option("--no-rule", disabled, "disable a simplifier rule (R1..R6), repeatable")
      ->check(CLI::IsMember({"R1", "R2", "R3", "R4", "R5", "R6"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (std::getenv("LOOPINV_SEED") != nullptr) {
    std::cerr << "loopinv: LOOPINV_SEED is set, but runs are deterministic and take no seed; unset it\n";
    return 64;
  }

  for (const auto& r : disabled) cfg.engine.simp.disabled.insert(*loopinv::parse_rule(r));
  cfg.engine.wlp_mode = loop_row == "substitute" ? loopinv::WlpLoopMode::Substitute : loopinv::WlpLoopMode::Invariant;
  const std::map<std::string, loopinv::Mode> modes = {
      {"discover", loopinv::Mode::Discover}, {"verify", loopinv::Mode::Verify}, {"trace", loopinv::Mode::Trace}};
  const loopinv::Mode mode = modes.at(mode_name);

  loopinv::Triple triple;
  try {
    const auto src = loopinv::read_source(file);
    triple = loopinv::parse_program(src.text);
  } catch (const loopinv::ParseError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "loopinv: " << e.what() << "\n";
    return 3;
  }

  const loopinv::ProgramReport report =
      mode == loopinv::Mode::Verify ? loopinv::verify_program(triple, cfg) : loopinv::annotate_program(triple, cfg);
  if (mode != loopinv::Mode::Verify)
    for (const auto& w : loopinv::warnings(report)) std::cerr << "warning: " << w << "\n";
  if (format == "json")
    std::cout << loopinv::render_json(report, mode);
  else
    std::cout << loopinv::render_text(report, mode, cfg.solver);
  return loopinv::exit_code(report, mode);
}
