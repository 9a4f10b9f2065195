#pragma once

#include <string>

#include "loopinv/driver.hpp"

namespace loopinv {

enum class Mode { Discover, Verify, Trace };

/// 0 all loops VerifiedUpToBound, 1 a requirement failed, 2 discovery or solving failed.
int exit_code(const ProgramReport& r, Mode mode);

/// One "variable v updated in loop body but absent from invariant" line per lost variable.
std::vector<std::string> warnings(const ProgramReport& r);

std::string render_text(const ProgramReport& r, Mode mode, const SolverConfig& cfg);

/// {"loops":[{location, invariant, genvars, assignment, verdict, trace, ...}], "triple": ...}
std::string render_json(const ProgramReport& r, Mode mode);

}  // namespace loopinv
