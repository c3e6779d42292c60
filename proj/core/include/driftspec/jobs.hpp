#pragma once

#include <iosfwd>

#include "driftspec/config.hpp"
#include "driftspec/report_io.hpp"

namespace driftspec {

/// Process exit codes of a job run.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,   ///< bad config, expression, geometry or unwritable output
  kExitNumericError = 2,  ///< non-convergence, indefinite mass matrix, ...
  kExitCheckFailed = 3    ///< an asserted inequality or identity failed
};

/// Config fields as report metadata, with per-kind defaults filled in.
MetaList config_echo(const JobConfig& cfg);

/// Runs the experiment for `cfg` and builds its report. Failed checks are
/// recorded in `failures`; library errors propagate.
JobReport execute_job(const JobConfig& cfg);

/// execute_job plus output files. Prints a short summary to `out`, and every
/// error or failed check as a one-line diagnostic to `err`.
int run_job(const JobConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace driftspec
