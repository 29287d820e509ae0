#pragma once

#include <string>

#include "harvest/config.hpp"

namespace harvest {

/// Exit codes of run(): 0 success, 1 config errors, 2 iteration failures
/// (NotConverged, MaxIterations, Diverged, JacobianSingular), 3 regime
/// errors (Extinct, NotCoercive, NoSignChange, NotPositiveDefinite, ...).
int exit_code_for(const Error& e);

/// Executes the configured mode and writes fields.csv / trace.csv /
/// report.txt into config.out_dir. report.txt is written even on failure and
/// then carries the error classification. Returns the exit code.
int run(const RunConfig& config);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_full(double v);

}  // namespace harvest
