#include "driftspec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "driftspec/error.hpp"

namespace driftspec {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;

void require_converged(const SpectrumResult& r, const std::string& what) {
  if (!r.converged) {
    throw NumericError(what + ": eigensolver did not converge in " +
                       std::to_string(r.iterations) + " iterations");
  }
}

struct DriftSolve {
  IntervalMesh mesh;
  OperatorPencil pencil;
  SpectrumResult spectrum;
};

DriftSolve solve_drift(const IntervalDomain& domain, const WeightSpec& w,
                       BoundaryCondition bc, std::size_t n, std::size_t k,
                       const SolveOptions& opts) {
  IntervalMesh mesh = build_interval_mesh(domain, n);
  OperatorPencil pencil = assemble_drift_1d(mesh, w, bc);
  SpectrumResult r = solve_smallest(pencil, k, opts);
  require_converged(r, pencil.description);
  return {std::move(mesh), std::move(pencil), std::move(r)};
}

struct ThinSolve {
  MappedGrid grid;
  OperatorPencil pencil;
  SpectrumResult spectrum;
};

ThinSolve solve_thin(const ThinDomainSpec& spec, std::size_t nx, std::size_t nt,
                     std::size_t k, const SolveOptions& opts) {
  MappedGrid grid = build_mapped_grid(spec, nx, nt);
  OperatorPencil pencil = assemble_thin_2d(grid);
  SpectrumResult r = solve_smallest(pencil, k, opts);
  require_converged(r, pencil.description);
  return {std::move(grid), std::move(pencil), std::move(r)};
}

double accuracy_floor(double tol, double mu) { return tol * std::max(1.0, std::abs(mu)); }

/// Slope fit and one-sided bound for one eigenvalue index.
OrderFit classify(std::size_t k, const std::vector<double>& eps,
                  const std::vector<double>& signed_err, double floor) {
  OrderFit fit;
  fit.k = k;
  fit.floor = floor;
  std::vector<double> e_above;
  std::vector<double> err_above;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double e = std::abs(signed_err[i]);
    if (e > floor) {
      e_above.push_back(eps[i]);
      err_above.push_back(e);
    }
  }
  if (err_above.size() == eps.size()) {
    // A single epsilon gives no slope; the row is still reported.
    if (eps.size() < 2) return fit;
    fit.fitted = true;
    fit.order = fit_order(eps, err_above);
  } else if (err_above.empty()) {
    fit.at_floor = true;
  } else {
    fit.hits_floor = true;
    if (err_above.size() >= 3) {
      fit.fitted = true;
      fit.order = fit_order(e_above, err_above);
    }
  }
  if (eps.size() < 2) return fit;
  // eps is descending, so the first two entries are the largest.
  const double c = std::max(signed_err[0] / (eps[0] * eps[0]),
                            signed_err[1] / (eps[1] * eps[1]));
  for (std::size_t i = 2; i < eps.size(); ++i) {
    if (signed_err[i] > c * eps[i] * eps[i] + floor) fit.one_sided_bound = false;
  }
  return fit;
}

/// Thin spectra for every eps, compared with `reference` (one value per k).
/// `disc` estimates the x-discretization error of the thin solves per k.
ConvergenceReport compare_thin(const IntervalDomain& domain, const WeightSpec& w,
                               const std::vector<double>& eps_list, std::size_t nx,
                               std::size_t nt, const std::vector<double>& reference,
                               const std::vector<double>& change,
                               const std::vector<double>& disc, const SolveOptions& opts) {
  const std::size_t count = reference.size();
  ConvergenceReport rep;
  rep.epsilons = eps_list;
  rep.reference = reference;
  rep.reference_change = change;

  std::vector<std::vector<double>> signed_err(count);
  for (double eps : eps_list) {
    const ThinSolve s = solve_thin(ThinDomainSpec{domain, w, eps}, nx, nt, count, opts);
    rep.paths.push_back(s.spectrum.path);
    for (std::size_t k = 0; k < count; ++k) {
      const double mu = s.spectrum.eigenvalues[k];
      rep.rows.push_back({eps, k, mu, reference[k], std::abs(mu - reference[k])});
      signed_err[k].push_back(mu - reference[k]);
    }
  }
  for (std::size_t k = 0; k < count; ++k) {
    const double floor =
        2.0 * disc[k] + 10.0 * std::max(change[k], accuracy_floor(opts.tol, reference[k]));
    rep.orders.push_back(classify(k, eps_list, signed_err[k], floor));
  }
  return rep;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

/// Centered differences on a uniform grid, one-sided at the ends.
std::vector<double> derivative(const std::vector<double>& x, const std::vector<double>& u) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    d[i] = (u[hi] - u[lo]) / (x[hi] - x[lo]);
  }
  return d;
}

double m_inner(const SparseMatrix& m, const VectorXd& u, const VectorXd& v) {
  return u.dot(m * v);
}

}  // namespace

// ---------------------------------------------------------------------------

SpectrumResult drift_spectrum(const IntervalDomain& domain, const WeightSpec& w,
                              BoundaryCondition bc, std::size_t n, std::size_t k,
                              const SolveOptions& opts) {
  return solve_drift(domain, w, bc, n, k, opts).spectrum;
}

SpectrumResult thin_spectrum(const ThinDomainSpec& spec, std::size_t nx, std::size_t nt,
                             std::size_t k, const SolveOptions& opts) {
  return solve_thin(spec, nx, nt, k, opts).spectrum;
}

std::vector<double> nodal_values(const OperatorPencil& p, const SpectrumResult& r,
                                 std::size_t j, std::size_t node_count) {
  if (j >= r.size()) throw NumericError("eigenvector index out of range");
  std::vector<double> u(node_count, 0.0);
  for (std::size_t d = 0; d < p.dof_count(); ++d) {
    const std::size_t node = p.dof_to_node[d];
    if (node >= node_count) throw NumericError("dof maps outside the mesh");
    u[node] = r.eigenvectors(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(j));
  }
  return u;
}

// ---------------------------------------------------------------------------

void validate_epsilon_list(const std::vector<double>& eps, std::size_t min_points) {
  if (eps.size() < min_points) {
    throw ConfigError("epsilon list needs at least " + std::to_string(min_points) +
                      " values, got " + std::to_string(eps.size()));
  }
  for (double e : eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("epsilon values must be positive");
  }
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (!(eps[i] < eps[i - 1])) throw ConfigError("epsilon list must be strictly descending");
  }
  if (eps.size() >= 3) {
    const double ratio = eps[1] / eps[0];
    for (std::size_t i = 2; i < eps.size(); ++i) {
      const double r = eps[i] / eps[i - 1];
      if (std::abs(r - ratio) > 1e-9 * ratio) {
        throw ConfigError("epsilon list must be geometric (constant ratio)");
      }
    }
  }
}

double fit_order(const std::vector<double>& eps, const std::vector<double>& err) {
  if (eps.size() != err.size() || eps.size() < 2) {
    throw NumericError("order fit needs at least two (eps, err) pairs");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(err[i] > 0.0)) throw NumericError("order fit needs positive errors");
    const double lx = std::log(eps[i]);
    const double ly = std::log(err[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw NumericError("order fit needs distinct eps values");
  return (n * sxy - sx * sy) / den;
}

// ---------------------------------------------------------------------------

ConvergenceReport convergence_study(const IntervalDomain& domain, const WeightSpec& w,
                                    const std::vector<double>& eps_list,
                                    const ConvergenceOptions& opts) {
  validate_epsilon_list(eps_list, 4);
  const std::size_t count = opts.k_max + 1;

  const SpectrumResult coarse = drift_spectrum(domain, w, BoundaryCondition::neumann,
                                               opts.ref_n, count, opts.solve);
  const SpectrumResult fine = drift_spectrum(domain, w, BoundaryCondition::neumann,
                                             2 * opts.ref_n, count, opts.solve);
  // Discretization-matched 1D solve: the eps -> 0 limit of the thin solves.
  const SpectrumResult matched = drift_spectrum(domain, w, BoundaryCondition::neumann,
                                                opts.nx, count, opts.solve);

  // mu_0 = 0 is exact (constants span the kernel); only k >= 1 is extrapolated.
  std::vector<double> reference(count, 0.0), change(count, 0.0), disc(count, 0.0);
  for (std::size_t k = 1; k < count; ++k) {
    const double correction = (fine.eigenvalues[k] - coarse.eigenvalues[k]) / 3.0;
    reference[k] = fine.eigenvalues[k] + correction;
    change[k] = std::abs(correction);
    disc[k] = std::abs(matched.eigenvalues[k] - reference[k]);
  }

  ConvergenceReport rep = compare_thin(domain, w, eps_list, opts.nx, opts.nt, reference,
                                       change, disc, opts.solve);

  // The smallest expected eps^2 signal is the thin/1D gap at the smallest eps,
  // measured against the matched 1D solve so the reference does not enter.
  const std::size_t last = (eps_list.size() - 1) * count;
  for (std::size_t k = 0; k < count; ++k) {
    const double signal = std::abs(rep.rows[last + k].mu_eps - matched.eigenvalues[k]);
    if (signal <= 10.0 * accuracy_floor(opts.solve.tol, reference[k])) continue;
    if (!(change[k] < signal / 10.0)) {
      std::ostringstream msg;
      msg << "reference not converged for k = " << k << ": Richardson correction "
          << change[k] << " is not below a tenth of the eps^2 signal " << signal
          << " (increase ref_n)";
      throw NumericError(msg.str());
    }
  }

  std::ostringstream note;
  note << "Richardson extrapolation of 1D drift solves at n = " << opts.ref_n << " and "
       << 2 * opts.ref_n;
  rep.reference_note = note.str();
  return rep;
}

// ---------------------------------------------------------------------------

Corollary1Report corollary1_harness(const IntervalDomain& domain,
                                    const std::vector<double>& eps_list,
                                    const Corollary1Options& opts) {
  validate_epsilon_list(eps_list, 1);
  const std::size_t count = opts.k_max + 1;
  Corollary1Report rep;
  rep.norm = opts.norm;

  const DriftSolve dir = solve_drift(domain, WeightSpec(), BoundaryCondition::dirichlet,
                                     opts.n, count, opts.solve);
  rep.dirichlet = dir.spectrum.eigenvalues;

  std::vector<double> phi1 = nodal_values(dir.pencil, dir.spectrum, 0, dir.mesh.nodes.size());
  const double d = domain.diameter();
  double sup_err = 0.0;
  bool positive = true;
  for (std::size_t i = 0; i < phi1.size(); ++i) {
    const double x = dir.mesh.nodes[i];
    const double exact = std::sqrt(2.0 / d) * std::sin(kPi * (x - domain.a()) / d);
    sup_err = std::max(sup_err, std::abs(phi1[i] - exact));
    const bool interior = i > 0 && i + 1 < phi1.size();
    if (interior && !(phi1[i] > 0.0)) positive = false;
  }
  rep.ground_state_sup_error = sup_err;
  rep.ground_state_positive = positive;
  if (!positive) throw NumericError("Dirichlet ground state changes sign");

  if (opts.norm == GroundStateNorm::unit_max) {
    const double peak = sup_abs(phi1);
    for (double& v : phi1) v /= peak;
  }
  const WeightSpec height = WeightSpec::squared_samples(dir.mesh.nodes, phi1);

  std::vector<double> reference(count), change(count, 0.0), disc(count, 0.0);
  for (std::size_t k = 0; k < count; ++k) {
    reference[k] = rep.dirichlet[k] - rep.dirichlet[0];
  }
  rep.convergence = compare_thin(domain, height, eps_list, opts.nx, opts.nt, reference,
                                 change, disc, opts.solve);
  std::ostringstream note;
  note << "Dirichlet gaps lambda_{k+1} - lambda_1 at n = " << opts.n;
  rep.convergence.reference_note = note.str();

  const std::size_t last = (eps_list.size() - 1) * count;
  rep.max_rel_gap.assign(count, 0.0);
  for (std::size_t k = 1; k < count; ++k) {
    const ConvergenceRow& row = rep.convergence.rows[last + k];
    rep.max_rel_gap[k] = row.abs_err / reference[k];
  }
  return rep;
}

Prop2Report prop2_check(const IntervalDomain& domain, std::size_t n, std::size_t k_max,
                        const SolveOptions& opts) {
  if (k_max == 0) throw ConfigError("prop2 needs k_max >= 1");
  const DriftSolve dir =
      solve_drift(domain, WeightSpec(), BoundaryCondition::dirichlet, n, k_max, opts);
  const std::vector<double> phi1 =
      nodal_values(dir.pencil, dir.spectrum, 0, dir.mesh.nodes.size());
  const WeightSpec measure = WeightSpec::squared_samples(dir.mesh.nodes, phi1);
  // phi_1 vanishes at the endpoints, so the drift weight degenerates there;
  // the quadrature points are interior and stay positive.
  const SpectrumResult drift =
      drift_spectrum(domain, measure, BoundaryCondition::neumann, n, k_max, opts);

  Prop2Report rep;
  const double lambda1 = dir.spectrum.eigenvalues[0];
  for (std::size_t k = 1; k <= k_max; ++k) {
    Prop2Row row;
    row.k = k;
    row.lambda_k = dir.spectrum.eigenvalues[k - 1];
    row.lambda_gap = row.lambda_k - lambda1;
    row.drift_mu = drift.eigenvalues[k - 1];
    row.rel_mismatch = std::abs(row.drift_mu - row.lambda_gap) / std::max(1.0, row.lambda_gap);
    if (row.rel_mismatch > rep.tolerance) rep.passed = false;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------

GapReport gap_check(const IntervalDomain& domain, const WeightSpec& f, std::size_t n_pairs,
                    std::size_t n, GapConvention convention, const SolveOptions& opts) {
  if (n_pairs < 2) throw ConfigError("gap check needs at least 2 sample points");
  GapReport rep;
  rep.convention = convention;
  const double d = domain.diameter();
  rep.diameter = d;
  rep.bound = 3.0 * kPi * kPi / (d * d);

  std::vector<double> xs(n_pairs), slope(n_pairs);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    xs[i] = domain.a() + d * (static_cast<double>(i) + 0.5) / static_cast<double>(n_pairs);
    slope[i] = f.log_derivative(xs[i]);
  }

  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_pairs; ++i) {
    for (std::size_t j = i + 1; j < n_pairs; ++j) {
      GapPair pair;
      pair.x = xs[i];
      pair.y = xs[j];
      const double gap = pair.y - pair.x;  // positive, sign(y - x) = +1
      const double diff = slope[j] - slope[i];
      if (convention == GapConvention::paper_literal) {
        const double angle = kPi * gap / d;
        if (std::abs(std::cos(angle)) < 1e-6) {
          ++rep.skipped_pairs;
          continue;
        }
        pair.lhs = diff;
        pair.rhs = (4.0 * kPi / d) * std::tan(angle);
        pair.margin = pair.lhs - pair.rhs;
      } else {
        pair.lhs = 2.0 * diff;
        pair.rhs = -(4.0 * kPi / d) * std::tan(kPi * gap / (2.0 * d));
        pair.margin = pair.rhs - pair.lhs;
      }
      rep.min_margin = std::min(rep.min_margin, pair.margin);
      if (std::abs(pair.x + pair.y - domain.a() - domain.b()) <= 1e-12 * (1.0 + d)) {
        ++rep.symmetric_pairs;
        rep.symmetric_max_abs_margin =
            std::max(rep.symmetric_max_abs_margin, std::abs(pair.margin));
      }
      rep.pairs.push_back(pair);
    }
  }
  if (rep.pairs.empty()) throw NumericError("gap check: every pair was skipped");
  rep.condition_satisfied = rep.min_margin >= -kMarginTolerance;

  const SpectrumResult r =
      drift_spectrum(domain, f.squared(), BoundaryCondition::neumann, n, 2, opts);
  rep.drift_mu1 = r.eigenvalues[1];
  rep.bound_satisfied = rep.drift_mu1 >= rep.bound - rep.tolerance;
  return rep;
}

// ---------------------------------------------------------------------------

ResidualReport eigenfunction_residual(const IntervalDomain& domain, const WeightSpec& w,
                                      const std::vector<double>& eps_list, std::size_t nx,
                                      std::size_t nt, std::size_t k, const SolveOptions& opts) {
  validate_epsilon_list(eps_list, 2);
  if (nt < 3) throw ConfigError("residual study needs nt >= 3 for the y-derivative");

  // Model profile psi_k from the 1D drift problem on the same base nodes.
  const DriftSolve model = solve_drift(domain, w, BoundaryCondition::neumann, nx, k + 1, opts);
  const std::vector<double>& xs = model.mesh.nodes;
  const std::vector<double> psi_model =
      nodal_values(model.pencil, model.spectrum, k, xs.size());
  const std::vector<double> dpsi_model = derivative(xs, psi_model);
  std::vector<double> slope(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) slope[i] = w.log_derivative(xs[i]);

  ResidualReport rep;
  std::vector<double> residuals, distances;
  for (double eps : eps_list) {
    ThinSolve s = solve_thin(ThinDomainSpec{domain, w, eps}, nx, nt, k + 1, opts);
    rescale_to_volume(s.spectrum, eps);
    const MappedGrid& g = s.grid;
    const auto col = static_cast<Eigen::Index>(k);
    const VectorXd v = s.spectrum.eigenvectors.col(col);

    ResidualSample smp;
    smp.epsilon = eps;
    smp.k = k;
    smp.mu_eps = s.spectrum.eigenvalues[k];
    smp.x = xs;
    smp.model_psi = psi_model;
    smp.psi.resize(xs.size());
    smp.d2y.resize(xs.size());
    const double dt = g.t()[1] - g.t()[0];
    for (std::size_t i = 0; i <= g.nx(); ++i) {
      const double u0 = v(static_cast<Eigen::Index>(g.node_index(i, 0)));
      const double u1 = v(static_cast<Eigen::Index>(g.node_index(i, 1)));
      const double u2 = v(static_cast<Eigen::Index>(g.node_index(i, 2)));
      const double h = g.height(i);
      smp.psi[i] = u0;
      smp.d2y[i] = (u0 - 2.0 * u1 + u2) / (dt * dt * h * h);
    }
    const std::vector<double> dpsi = derivative(xs, smp.psi);
    smp.eta.resize(xs.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      smp.eta[i] = slope[i] * dpsi[i];
      if (i > 0 && i + 1 < xs.size()) sup = std::max(sup, std::abs(smp.d2y[i] - smp.eta[i]));
    }
    smp.sup_residual = sup;

    // U_k = psi_k + y^2 eta_k / 2 with eta_k from the model profile.
    VectorXd u(static_cast<Eigen::Index>(g.node_count()));
    for (std::size_t i = 0; i <= g.nx(); ++i) {
      const double eta = slope[i] * dpsi_model[i];
      for (std::size_t j = 0; j <= g.nt(); ++j) {
        const double y = g.physical_y(i, j);
        u(static_cast<Eigen::Index>(g.node_index(i, j))) = psi_model[i] + 0.5 * y * y * eta;
      }
    }
    const SparseMatrix& m = s.pencil.mass;
    const double alpha = m_inner(m, u, v) / m_inner(m, u, u);
    const VectorXd diff = v - alpha * u;
    smp.l2_model_distance = std::sqrt(m_inner(m, diff, diff) / m_inner(m, v, v));

    residuals.push_back(smp.sup_residual);
    distances.push_back(smp.l2_model_distance);
    rep.samples.push_back(std::move(smp));
  }
  rep.residual_decreasing = strictly_decreasing(residuals);
  rep.distance_decreasing = strictly_decreasing(distances);
  return rep;
}

// ---------------------------------------------------------------------------

Prop4Report prop4_check(const IntervalDomain& domain, const WeightSpec& w, std::size_t n,
                        std::size_t k, std::size_t trials, std::uint64_t seed,
                        const SolveOptions& opts) {
  const DriftSolve s = solve_drift(domain, w, BoundaryCondition::neumann, n, k + 1, opts);
  const OperatorPencil& p = s.pencil;
  const SparseMatrix& m = p.mass;
  const auto dofs = static_cast<Eigen::Index>(p.dof_count());
  const auto cols = static_cast<Eigen::Index>(k + 1);

  double sum_mu = 0.0;
  for (std::size_t j = 0; j <= k; ++j) sum_mu += s.spectrum.eigenvalues[j];
  const double scale = std::max(1.0, std::abs(sum_mu));

  auto evaluate = [&](MatrixXd x) {
    // Modified Gram-Schmidt in the M inner product.
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index prev = 0; prev < c; ++prev) {
        x.col(c) -= m_inner(m, x.col(prev), x.col(c)) * x.col(prev);
      }
      const double nrm = std::sqrt(m_inner(m, x.col(c), x.col(c)));
      if (!(nrm > 0.0)) throw NumericError("prop4: degenerate trial set");
      x.col(c) /= nrm;
    }
    double total = 0.0;
    for (Eigen::Index c = 0; c < cols; ++c) total += rayleigh_quotient(p, x.col(c));
    return total;
  };

  Prop4Report rep;
  rep.k = k;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const MatrixXd eig = s.spectrum.eigenvectors.leftCols(cols);

  for (std::size_t t = 0; t < trials; ++t) {
    MatrixXd x(dofs, cols);
    for (Eigen::Index r = 0; r < dofs; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) x(r, c) = uni(rng);
    }
    // Alternate fully random sets with small perturbations of the eigenvectors,
    // which probe the inequality close to equality.
    if (t % 2 == 1) {
      const double amp = std::pow(10.0, -1.0 - static_cast<double>((t / 2) % 6));
      x = eig + amp * x;
    }
    Prop4Trial trial;
    trial.index = t;
    trial.sum_mu = sum_mu;
    trial.sum_rayleigh = evaluate(std::move(x));
    trial.margin = trial.sum_rayleigh - sum_mu;
    if (trial.margin < -1e-10 * scale) rep.inequality_holds = false;
    rep.trials.push_back(trial);
  }

  Prop4Trial exact;
  exact.index = trials;
  exact.eigenvectors = true;
  exact.sum_mu = sum_mu;
  exact.sum_rayleigh = evaluate(eig);
  exact.margin = exact.sum_rayleigh - sum_mu;
  rep.trials.push_back(exact);
  rep.equality_error = std::abs(exact.margin) / scale;
  rep.equality_holds = rep.equality_error <= 1e-10;
  if (exact.margin < -1e-10 * scale) rep.inequality_holds = false;
  return rep;
}

}  // namespace driftspec
