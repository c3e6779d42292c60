#include "driftspec/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "driftspec/error.hpp"

#ifndef DRIFTSPEC_VERSION
#define DRIFTSPEC_VERSION "unknown"
#endif

namespace driftspec {

std::string_view version() { return DRIFTSPEC_VERSION; }

// ---------------------------------------------------------------------------
// Enum spellings

namespace {

template <class E, std::size_t N>
E lookup(std::string_view s, const std::pair<std::string_view, E> (&table)[N],
         std::string_view what) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  std::string names;
  for (const auto& entry : table) {
    if (!names.empty()) names += ", ";
    names += entry.first;
  }
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(s) +
                    "' (expected one of: " + names + ")");
}

template <class E, std::size_t N>
std::string_view name_of(E v, const std::pair<std::string_view, E> (&table)[N]) {
  for (const auto& [name, value] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::pair<std::string_view, JobKind> kKinds[] = {
    {"drift", JobKind::drift},         {"dirichlet", JobKind::dirichlet},
    {"thin", JobKind::thin},           {"converge", JobKind::converge},
    {"corollary1", JobKind::corollary1}, {"prop2", JobKind::prop2},
    {"gapcheck", JobKind::gapcheck},   {"residual", JobKind::residual},
    {"prop4", JobKind::prop4}};

constexpr std::pair<std::string_view, SolverChoice> kSolvers[] = {
    {"auto", SolverChoice::automatic},
    {"dense", SolverChoice::dense},
    {"iterative", SolverChoice::iterative}};

constexpr std::pair<std::string_view, GapConvention> kConventions[] = {
    {"model-consistent", GapConvention::model_consistent},
    {"paper-literal", GapConvention::paper_literal}};

constexpr std::pair<std::string_view, GroundStateNorm> kNorms[] = {
    {"unit-max", GroundStateNorm::unit_max}, {"unit-l2", GroundStateNorm::unit_l2}};

constexpr std::pair<std::string_view, PreconditionerKind> kPreconditioners[] = {
    {"cholesky", PreconditionerKind::cholesky}, {"jacobi", PreconditionerKind::jacobi}};

}  // namespace

std::string_view to_string(JobKind k) { return name_of(k, kKinds); }
std::string_view to_string(GapConvention c) { return name_of(c, kConventions); }
std::string_view to_string(GroundStateNorm n) { return name_of(n, kNorms); }

JobKind parse_job_kind(std::string_view s) { return lookup(s, kKinds, "job kind"); }
SolverChoice parse_solver(std::string_view s) { return lookup(s, kSolvers, "solver"); }
GapConvention parse_convention(std::string_view s) {
  return lookup(s, kConventions, "convention");
}
GroundStateNorm parse_ground_state_norm(std::string_view s) {
  return lookup(s, kNorms, "ground-state normalization");
}
PreconditionerKind parse_preconditioner(std::string_view s) {
  return lookup(s, kPreconditioners, "preconditioner");
}

// ---------------------------------------------------------------------------
// Defaults and validation

std::size_t JobConfig::effective_n() const {
  if (n) return *n;
  return kind == JobKind::prop4 ? 400 : 2000;
}

std::size_t JobConfig::effective_num_eigs() const {
  if (num_eigs) return *num_eigs;
  switch (kind) {
    case JobKind::converge:
    case JobKind::corollary1:
    case JobKind::prop2:
      return 3;
    case JobKind::prop4:
      return 4;
    default:
      return 5;
  }
}

WeightSpec JobConfig::weight() const {
  if (phi) return WeightSpec::from_phi_text(*phi);
  if (f) return WeightSpec::from_f_text(*f);
  return WeightSpec();
}

SolveOptions JobConfig::solve_options() const {
  SolveOptions o;
  o.solver = solver;
  o.tol = tol;
  o.seed = seed;
  o.preconditioner = preconditioner;
  return o;
}

void validate_config(const JobConfig& cfg) {
  if (!std::isfinite(cfg.a) || !std::isfinite(cfg.b) || !(cfg.a < cfg.b)) {
    throw ConfigError("domain must satisfy a < b");
  }
  const bool has_phi = cfg.phi.has_value();
  const bool has_f = cfg.f.has_value();
  if (has_phi && has_f) throw ConfigError("exactly one of phi/f may be given");
  switch (cfg.kind) {
    case JobKind::dirichlet:
      break;
    case JobKind::corollary1:
    case JobKind::prop2:
      if (has_phi || has_f) {
        throw ConfigError(std::string("phi/f is not used by kind ") +
                          std::string(to_string(cfg.kind)) +
                          " (the weight is the computed Dirichlet ground state)");
      }
      break;
    default:
      if (!has_phi && !has_f) {
        throw ConfigError(std::string("exactly one of phi/f is required for kind ") +
                          std::string(to_string(cfg.kind)));
      }
  }
  // Expression syntax errors surface here rather than mid-run.
  try {
    (void)cfg.weight();
  } catch (const ParseError& e) {
    throw ConfigError(std::string(has_phi ? "phi" : "f") + ": " + e.what());
  }

  switch (cfg.kind) {
    case JobKind::thin:
      if (cfg.epsilon.size() != 1) throw ConfigError("kind thin needs exactly one epsilon");
      if (!(cfg.epsilon[0] > 0.0)) throw ConfigError("epsilon must be positive");
      break;
    case JobKind::converge:
      validate_epsilon_list(cfg.epsilon, 4);
      break;
    case JobKind::residual:
      validate_epsilon_list(cfg.epsilon, 2);
      break;
    case JobKind::corollary1:
      validate_epsilon_list(cfg.epsilon, 1);
      break;
    default:
      break;
  }

  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) throw ConfigError("tol must be positive");
  if (cfg.nx < 2 || cfg.nt < 2) throw ConfigError("nx and nt must be >= 2");
  if (cfg.kind == JobKind::residual && cfg.nt < 3) {
    throw ConfigError("kind residual needs nt >= 3");
  }
  if (cfg.effective_n() < 2) throw ConfigError("n must be >= 2");
  if (cfg.ref_n < 2) throw ConfigError("ref_n must be >= 2");
  const std::size_t k = cfg.effective_num_eigs();
  if ((cfg.kind == JobKind::converge || cfg.kind == JobKind::corollary1 ||
       cfg.kind == JobKind::prop2) && k < 2) {
    throw ConfigError("num_eigs must be >= 2 for kind " + std::string(to_string(cfg.kind)));
  }
  if (cfg.kind == JobKind::prop4 && k < 1) throw ConfigError("num_eigs must be >= 1");
  if (cfg.kind == JobKind::gapcheck && cfg.pairs < 2) throw ConfigError("pairs must be >= 2");
  if (cfg.kind == JobKind::prop4 && cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (cfg.kind == JobKind::residual && cfg.mode < 1) throw ConfigError("mode must be >= 1");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class LineError {
 public:
  LineError(std::string_view source, std::size_t line) : source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(std::string(source_) + ":" + std::to_string(line_) + ": " + what);
  }

 private:
  std::string_view source_;
  std::size_t line_;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Drops a trailing comment; '#' inside quotes is kept.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && quoted) {
      ++i;
    } else if (s[i] == '"') {
      quoted = !quoted;
    } else if (s[i] == '#' && !quoted) {
      return s.substr(0, i);
    }
  }
  return s;
}

std::string parse_string(std::string_view v, const LineError& err) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
    err.fail("expected a double-quoted string, got '" + std::string(v) + "'");
  }
  std::string out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    char c = v[i];
    if (c == '\\') {
      if (i + 2 >= v.size()) err.fail("dangling escape in string");
      c = v[++i];
      if (c != '"' && c != '\\') err.fail(std::string("unknown escape \\") + c);
    } else if (c == '"') {
      err.fail("unescaped quote inside string");
    }
    out.push_back(c);
  }
  return out;
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    items.push_back(trim(v.substr(start, comma == std::string_view::npos ? v.npos
                                                                         : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

double parse_number(std::string_view v, const LineError& err) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (v.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(x)) {
    err.fail("malformed number '" + std::string(v) + "'");
  }
  return x;
}

std::uint64_t parse_count(std::string_view v, const LineError& err) {
  std::uint64_t x = 0;
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (v.empty() || res.ec != std::errc() || res.ptr != end) {
    err.fail("malformed non-negative integer '" + std::string(v) + "'");
  }
  return x;
}

std::vector<double> parse_numbers(std::string_view v, const LineError& err) {
  std::vector<double> out;
  for (std::string_view item : split_list(v)) out.push_back(parse_number(item, err));
  return out;
}

}  // namespace

JobConfig parse_config(std::string_view text, std::string_view source) {
  JobConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const LineError err(source, line_no);

    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') err.fail("malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "problem" && section != "output") {
        err.fail("unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) err.fail("expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) err.fail("key '" + key + "' outside of a section");
    if (value.empty()) err.fail("missing value for '" + key + "'");
    if (!seen.insert(section + "." + key).second) err.fail("duplicate key '" + key + "'");

    if (section == "output") {
      if (key == "csv") {
        cfg.csv = parse_string(value, err);
      } else if (key == "json") {
        cfg.json = parse_string(value, err);
      } else {
        err.fail("unknown key '" + key + "' in [output]");
      }
      continue;
    }

    try {
      if (key == "kind") {
        cfg.kind = parse_job_kind(parse_string(value, err));
      } else if (key == "domain") {
        const auto ends = parse_numbers(value, err);
        if (ends.size() != 2) err.fail("domain needs two numbers 'a, b'");
        cfg.a = ends[0];
        cfg.b = ends[1];
      } else if (key == "phi") {
        cfg.phi = parse_string(value, err);
      } else if (key == "f") {
        cfg.f = parse_string(value, err);
      } else if (key == "epsilon") {
        cfg.epsilon = parse_numbers(value, err);
      } else if (key == "nx") {
        cfg.nx = parse_count(value, err);
      } else if (key == "nt") {
        cfg.nt = parse_count(value, err);
      } else if (key == "n") {
        cfg.n = parse_count(value, err);
      } else if (key == "num_eigs") {
        cfg.num_eigs = parse_count(value, err);
      } else if (key == "tol") {
        cfg.tol = parse_number(value, err);
      } else if (key == "solver") {
        cfg.solver = parse_solver(parse_string(value, err));
      } else if (key == "seed") {
        cfg.seed = parse_count(value, err);
      } else if (key == "convention") {
        cfg.convention = parse_convention(parse_string(value, err));
      } else if (key == "ref_n") {
        cfg.ref_n = parse_count(value, err);
      } else if (key == "pairs") {
        cfg.pairs = parse_count(value, err);
      } else if (key == "mode") {
        cfg.mode = parse_count(value, err);
      } else if (key == "trials") {
        cfg.trials = parse_count(value, err);
      } else if (key == "phi1_norm") {
        cfg.phi1_norm = parse_ground_state_norm(parse_string(value, err));
      } else if (key == "preconditioner") {
        cfg.preconditioner = parse_preconditioner(parse_string(value, err));
      } else {
        err.fail("unknown key '" + key + "' in [problem]");
      }
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      // Errors raised by LineError already carry the location.
      if (msg.rfind(std::string(source) + ":", 0) == 0) throw;
      err.fail(msg);
    }
  }

  for (const char* required : {"kind", "domain"}) {
    if (seen.count(std::string("problem.") + required) == 0) {
      throw ConfigError(std::string(source) + ": missing required key '" + required + "'");
    }
  }
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

JobConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace driftspec
