#include "driftspec/jobs.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "driftspec/error.hpp"

namespace driftspec {

namespace {

constexpr std::size_t kSummaryRows = 40;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

Table spectrum_table(const SpectrumResult& r, std::size_t first_index) {
  Table t{{"k", "eigenvalue", "residual"}, {}};
  for (std::size_t j = 0; j < r.size(); ++j) {
    t.rows.push_back({static_cast<double>(j + first_index), r.eigenvalues[j], r.residuals[j]});
  }
  return t;
}

void spectrum_meta(const SpectrumResult& r, MetaList& meta) {
  meta.emplace_back("solver_path", std::string(to_string(r.path)));
  meta.emplace_back("iterations", static_cast<std::int64_t>(r.iterations));
  meta.emplace_back("converged", r.converged);
  std::vector<double> cluster(r.cluster.begin(), r.cluster.end());
  meta.emplace_back("cluster", cluster);
}

Table convergence_table(const ConvergenceReport& c) {
  Table t{{"epsilon", "k", "mu_eps", "mu_ref", "abs_err"}, {}};
  for (const ConvergenceRow& row : c.rows) {
    t.rows.push_back(
        {row.epsilon, static_cast<double>(row.k), row.mu_eps, row.mu_ref, row.abs_err});
  }
  return t;
}

std::string order_status(const OrderFit& f) {
  if (f.at_floor) return "at_floor";
  if (f.hits_floor) return f.fitted ? "hits_floor_fitted" : "hits_floor";
  return "fitted";
}

void convergence_meta(const ConvergenceReport& c, MetaList& meta) {
  std::vector<double> orders, floors;
  std::vector<std::string> status, bound, paths;
  for (const OrderFit& f : c.orders) {
    orders.push_back(f.fitted ? f.order : 0.0);
    floors.push_back(f.floor);
    status.push_back(order_status(f));
    bound.push_back(f.one_sided_bound ? "ok" : "violated");
  }
  for (SolverPath p : c.paths) paths.emplace_back(to_string(p));
  meta.emplace_back("reference", c.reference);
  meta.emplace_back("reference_change", c.reference_change);
  meta.emplace_back("reference_note", c.reference_note);
  meta.emplace_back("fitted_orders", orders);
  meta.emplace_back("order_status", status);
  meta.emplace_back("error_floor", floors);
  meta.emplace_back("one_sided_bound", bound);
  meta.emplace_back("order_window", std::vector<double>{kOrderLow, kOrderHigh});
  meta.emplace_back("solver_paths", paths);
}

void order_failures(const ConvergenceReport& c, std::vector<std::string>& failures) {
  for (const OrderFit& f : c.orders) {
    const std::string k = "k = " + std::to_string(f.k) + ": ";
    if (f.fitted && (f.order < kOrderLow || f.order > kOrderHigh)) {
      failures.push_back(k + "fitted order " + fmt(f.order) + " outside [" + fmt(kOrderLow) +
                         ", " + fmt(kOrderHigh) + "]");
    }
    if (f.hits_floor && !f.fitted) {
      failures.push_back(k + "errors reach the floor " + fmt(f.floor) +
                         " on too many eps for a fit");
    }
    if (!f.one_sided_bound) failures.push_back(k + "one-sided bound mu_k(eps) <= mu_k + C eps^2 violated");
  }
}

JobReport run_drift(const JobConfig& cfg, BoundaryCondition bc) {
  JobReport rep;
  const SpectrumResult r = drift_spectrum(cfg.domain(), cfg.weight(), bc, cfg.effective_n(),
                                          cfg.effective_num_eigs(), cfg.solve_options());
  rep.table = spectrum_table(r, bc == BoundaryCondition::dirichlet ? 1 : 0);
  spectrum_meta(r, rep.metadata);
  return rep;
}

JobReport run_thin(const JobConfig& cfg) {
  JobReport rep;
  const ThinDomainSpec spec{cfg.domain(), cfg.weight(), cfg.epsilon.front()};
  const SpectrumResult r =
      thin_spectrum(spec, cfg.nx, cfg.nt, cfg.effective_num_eigs(), cfg.solve_options());
  rep.table = spectrum_table(r, 0);
  spectrum_meta(r, rep.metadata);
  return rep;
}

JobReport run_converge(const JobConfig& cfg) {
  ConvergenceOptions o;
  o.nx = cfg.nx;
  o.nt = cfg.nt;
  o.k_max = cfg.effective_num_eigs() - 1;
  o.ref_n = cfg.ref_n;
  o.solve = cfg.solve_options();
  const ConvergenceReport c = convergence_study(cfg.domain(), cfg.weight(), cfg.epsilon, o);
  JobReport rep;
  rep.table = convergence_table(c);
  convergence_meta(c, rep.metadata);
  order_failures(c, rep.failures);
  return rep;
}

JobReport run_corollary1(const JobConfig& cfg) {
  Corollary1Options o;
  o.n = cfg.effective_n();
  o.nx = cfg.nx;
  o.nt = cfg.nt;
  o.k_max = cfg.effective_num_eigs() - 1;
  o.norm = cfg.phi1_norm;
  o.solve = cfg.solve_options();
  const Corollary1Report c = corollary1_harness(cfg.domain(), cfg.epsilon, o);
  constexpr double kGapTolerance = 0.02;
  constexpr double kGroundStateTolerance = 1e-4;

  JobReport rep;
  rep.table = convergence_table(c.convergence);
  rep.metadata.emplace_back("dirichlet", c.dirichlet);
  rep.metadata.emplace_back("phi1_norm", std::string(to_string(c.norm)));
  rep.metadata.emplace_back("ground_state_sup_error", c.ground_state_sup_error);
  rep.metadata.emplace_back("ground_state_positive", c.ground_state_positive);
  rep.metadata.emplace_back("max_rel_gap", c.max_rel_gap);
  rep.metadata.emplace_back("gap_tolerance", kGapTolerance);
  convergence_meta(c.convergence, rep.metadata);

  if (c.ground_state_sup_error > kGroundStateTolerance) {
    rep.failures.push_back("computed ground state differs from sqrt(2/d) sin by " +
                           fmt(c.ground_state_sup_error));
  }
  for (std::size_t k = 1; k < c.max_rel_gap.size(); ++k) {
    if (c.max_rel_gap[k] > kGapTolerance) {
      rep.failures.push_back("k = " + std::to_string(k) + ": mu_k(eps) differs from " +
                             "lambda_{k+1} - lambda_1 by " + fmt(100.0 * c.max_rel_gap[k]) +
                             "% at the smallest eps");
    }
  }
  return rep;
}

JobReport run_prop2(const JobConfig& cfg) {
  const Prop2Report p = prop2_check(cfg.domain(), cfg.effective_n(), cfg.effective_num_eigs(),
                                    cfg.solve_options());
  JobReport rep;
  rep.table.columns = {"k", "lambda_k", "lambda_gap", "drift_mu", "rel_mismatch"};
  for (const Prop2Row& r : p.rows) {
    rep.table.rows.push_back(
        {static_cast<double>(r.k), r.lambda_k, r.lambda_gap, r.drift_mu, r.rel_mismatch});
  }
  rep.metadata.emplace_back("tolerance", p.tolerance);
  for (const Prop2Row& r : p.rows) {
    if (r.rel_mismatch > p.tolerance) {
      rep.failures.push_back("k = " + std::to_string(r.k) + ": drift mu " + fmt(r.drift_mu) +
                             " vs Dirichlet gap " + fmt(r.lambda_gap) + " (mismatch " +
                             fmt(r.rel_mismatch) + ")");
    }
  }
  return rep;
}

JobReport run_gapcheck(const JobConfig& cfg) {
  const GapReport g = gap_check(cfg.domain(), cfg.weight(), cfg.pairs, cfg.effective_n(),
                                cfg.convention, cfg.solve_options());
  JobReport rep;
  rep.table.columns = {"x", "y", "lhs", "rhs", "margin"};
  for (const GapPair& p : g.pairs) rep.table.rows.push_back({p.x, p.y, p.lhs, p.rhs, p.margin});
  rep.metadata.emplace_back("convention", std::string(to_string(g.convention)));
  rep.metadata.emplace_back("diameter", g.diameter);
  rep.metadata.emplace_back("skipped_pairs", as_int(g.skipped_pairs));
  rep.metadata.emplace_back("min_margin", g.min_margin);
  rep.metadata.emplace_back("margin_tolerance", kMarginTolerance);
  rep.metadata.emplace_back("condition_satisfied", g.condition_satisfied);
  rep.metadata.emplace_back("symmetric_pairs", as_int(g.symmetric_pairs));
  rep.metadata.emplace_back("symmetric_max_abs_margin", g.symmetric_max_abs_margin);
  rep.metadata.emplace_back("drift_mu1", g.drift_mu1);
  rep.metadata.emplace_back("bound", g.bound);
  rep.metadata.emplace_back("bound_tolerance", g.tolerance);
  rep.metadata.emplace_back("bound_satisfied", g.bound_satisfied);
  if (!g.condition_satisfied) {
    rep.failures.push_back("condition not satisfied (min margin " + fmt(g.min_margin) + ")");
  }
  if (!g.bound_satisfied) {
    rep.failures.push_back("gap bound violated: mu_1 = " + fmt(g.drift_mu1) +
                           " < 3 pi^2 / d^2 = " + fmt(g.bound));
  }
  return rep;
}

JobReport run_residual(const JobConfig& cfg) {
  const ResidualReport r = eigenfunction_residual(cfg.domain(), cfg.weight(), cfg.epsilon,
                                                  cfg.nx, cfg.nt, cfg.mode, cfg.solve_options());
  JobReport rep;
  rep.table.columns = {"epsilon", "k", "sup_residual", "l2_model_distance"};
  std::vector<double> mu;
  for (const ResidualSample& s : r.samples) {
    rep.table.rows.push_back(
        {s.epsilon, static_cast<double>(s.k), s.sup_residual, s.l2_model_distance});
    mu.push_back(s.mu_eps);
  }
  rep.metadata.emplace_back("mu_eps", mu);
  rep.metadata.emplace_back("residual_decreasing", r.residual_decreasing);
  rep.metadata.emplace_back("distance_decreasing", r.distance_decreasing);
  if (!r.residual_decreasing) rep.failures.push_back("sup residual not strictly decreasing in eps");
  if (!r.distance_decreasing) rep.failures.push_back("model distance not strictly decreasing in eps");
  return rep;
}

JobReport run_prop4(const JobConfig& cfg) {
  const Prop4Report p = prop4_check(cfg.domain(), cfg.weight(), cfg.effective_n(),
                                    cfg.effective_num_eigs() - 1, cfg.trials, cfg.seed,
                                    cfg.solve_options());
  JobReport rep;
  rep.table.columns = {"trial", "eigenvectors", "sum_mu", "sum_rayleigh", "margin"};
  std::size_t violations = 0;
  for (const Prop4Trial& t : p.trials) {
    rep.table.rows.push_back({static_cast<double>(t.index), t.eigenvectors ? 1.0 : 0.0,
                              t.sum_mu, t.sum_rayleigh, t.margin});
  }
  rep.metadata.emplace_back("k", as_int(p.k));
  rep.metadata.emplace_back("inequality_holds", p.inequality_holds);
  rep.metadata.emplace_back("equality_error", p.equality_error);
  rep.metadata.emplace_back("equality_holds", p.equality_holds);
  if (!p.inequality_holds) {
    for (const Prop4Trial& t : p.trials) violations += t.margin < 0.0 ? 1 : 0;
    rep.failures.push_back("partial-sum inequality violated (" + std::to_string(violations) +
                           " trials with negative margin)");
  }
  if (!p.equality_holds) {
    rep.failures.push_back("eigenvector trial differs from the eigenvalue sum by " +
                           fmt(p.equality_error) + " relative");
  }
  return rep;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

MetaList config_echo(const JobConfig& cfg) {
  MetaList m;
  m.emplace_back("kind", std::string(to_string(cfg.kind)));
  m.emplace_back("domain", std::vector<double>{cfg.a, cfg.b});
  if (cfg.phi) m.emplace_back("phi", *cfg.phi);
  if (cfg.f) m.emplace_back("f", *cfg.f);
  if (!cfg.epsilon.empty()) m.emplace_back("epsilon", cfg.epsilon);
  m.emplace_back("nx", as_int(cfg.nx));
  m.emplace_back("nt", as_int(cfg.nt));
  m.emplace_back("n", as_int(cfg.effective_n()));
  m.emplace_back("num_eigs", as_int(cfg.effective_num_eigs()));
  m.emplace_back("tol", cfg.tol);
  m.emplace_back("solver", std::string(to_string(cfg.solver)));
  m.emplace_back("seed", static_cast<std::int64_t>(cfg.seed));
  m.emplace_back("preconditioner", std::string(to_string(cfg.preconditioner)));
  switch (cfg.kind) {
    case JobKind::converge:
      m.emplace_back("ref_n", as_int(cfg.ref_n));
      break;
    case JobKind::corollary1:
      m.emplace_back("phi1_norm", std::string(to_string(cfg.phi1_norm)));
      break;
    case JobKind::gapcheck:
      m.emplace_back("convention", std::string(to_string(cfg.convention)));
      m.emplace_back("pairs", as_int(cfg.pairs));
      break;
    case JobKind::residual:
      m.emplace_back("mode", as_int(cfg.mode));
      break;
    case JobKind::prop4:
      m.emplace_back("trials", as_int(cfg.trials));
      break;
    default:
      break;
  }
  return m;
}

JobReport execute_job(const JobConfig& cfg) {
  validate_config(cfg);
  JobReport rep;
  switch (cfg.kind) {
    case JobKind::drift:
      rep = run_drift(cfg, BoundaryCondition::neumann);
      break;
    case JobKind::dirichlet:
      rep = run_drift(cfg, BoundaryCondition::dirichlet);
      break;
    case JobKind::thin:
      rep = run_thin(cfg);
      break;
    case JobKind::converge:
      rep = run_converge(cfg);
      break;
    case JobKind::corollary1:
      rep = run_corollary1(cfg);
      break;
    case JobKind::prop2:
      rep = run_prop2(cfg);
      break;
    case JobKind::gapcheck:
      rep = run_gapcheck(cfg);
      break;
    case JobKind::residual:
      rep = run_residual(cfg);
      break;
    case JobKind::prop4:
      rep = run_prop4(cfg);
      break;
  }
  rep.kind = std::string(to_string(cfg.kind));
  rep.version = std::string(version());
  rep.config = config_echo(cfg);
  return rep;
}

int run_job(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto diag = [&err](std::string_view tag, const std::string& what) {
    err << "drift-spectra: " << tag << ": " << one_line(what) << '\n';
  };
  JobReport rep;
  try {
    rep = execute_job(cfg);
    if (!cfg.csv.empty()) write_csv(rep.table, cfg.csv);
    if (!cfg.json.empty()) write_json(rep, cfg.json);
  } catch (const NumericError& e) {
    diag("numeric failure", e.what());
    return kExitNumericError;
  } catch (const Error& e) {
    diag("error", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    diag("numeric failure", e.what());
    return kExitNumericError;
  }

  out << rep.kind << ": " << rep.table.rows.size() << " rows\n";
  if (rep.table.rows.size() <= kSummaryRows) {
    out << format_csv(rep.table);
  } else {
    out << "(table omitted; use --csv or --json)\n";
  }
  out << "verdict: " << (rep.passed() ? "pass" : "FAIL") << '\n';
  for (const std::string& f : rep.failures) diag("check failed", f);
  return rep.passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace driftspec
