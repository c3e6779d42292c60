#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "driftspec/eigensolve.hpp"
#include "driftspec/experiments.hpp"

namespace driftspec {

enum class JobKind { drift, dirichlet, thin, converge, corollary1, prop2, gapcheck, residual, prop4 };

std::string_view to_string(JobKind k);
std::string_view to_string(GapConvention c);
std::string_view to_string(GroundStateNorm n);

/// Parsers for the enum spellings used in config files and on the command
/// line. Throw ConfigError on unknown names.
JobKind parse_job_kind(std::string_view s);
SolverChoice parse_solver(std::string_view s);
GapConvention parse_convention(std::string_view s);
GroundStateNorm parse_ground_state_norm(std::string_view s);
PreconditionerKind parse_preconditioner(std::string_view s);

/// One experiment run. Unset optionals take per-kind defaults (see the
/// `effective_*` accessors), so the echo in reports shows what was used.
struct JobConfig {
  JobKind kind = JobKind::drift;
  double a = 0.0;
  double b = 1.0;
  std::optional<std::string> phi;
  std::optional<std::string> f;
  std::vector<double> epsilon;
  std::size_t nx = 400;
  std::size_t nt = 8;
  std::optional<std::size_t> n;
  std::optional<std::size_t> num_eigs;
  double tol = 1e-8;
  SolverChoice solver = SolverChoice::automatic;
  std::uint64_t seed = 42;
  GapConvention convention = GapConvention::model_consistent;

  // Job-specific knobs.
  std::size_t ref_n = 2000;
  std::size_t pairs = 40;
  std::size_t mode = 1;
  std::size_t trials = 100;
  GroundStateNorm phi1_norm = GroundStateNorm::unit_max;
  PreconditionerKind preconditioner = PreconditionerKind::cholesky;

  std::string csv;
  std::string json;

  std::size_t effective_n() const;
  std::size_t effective_num_eigs() const;
  WeightSpec weight() const;  ///< phi == 0 when neither phi nor f is set
  IntervalDomain domain() const { return IntervalDomain(a, b); }
  SolveOptions solve_options() const;
};

/// Checks the cross-field invariants for `cfg.kind` (weight presence, epsilon
/// list shape, sizes). Throws ConfigError.
void validate_config(const JobConfig& cfg);

/// Parses the `key = value` format:
///
///   [problem]
///   kind = "converge"
///   domain = 0, 1
///   phi = "x"
///   epsilon = 0.2, 0.1, 0.05, 0.025
///   [output]
///   csv = "converge.csv"
///
/// Strings are double-quoted, lists comma-separated, '#' starts a comment.
/// Unknown or repeated keys are errors. The result is validated.
JobConfig parse_config(std::string_view text, std::string_view source = "<config>");

JobConfig load_config(const std::filesystem::path& path);

/// Library version string.
std::string_view version();

}  // namespace driftspec
