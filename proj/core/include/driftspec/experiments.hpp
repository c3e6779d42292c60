#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "driftspec/assembly.hpp"
#include "driftspec/eigensolve.hpp"
#include "driftspec/geometry.hpp"
#include "driftspec/weight.hpp"

namespace driftspec {

// ---------------------------------------------------------------------------
// Spectra

/// Drift spectrum of the weighted interval. Neumann results are indexed from
/// mu_0 = 0; Dirichlet results start at lambda_1 (eigenvalues[0] == lambda_1).
SpectrumResult drift_spectrum(const IntervalDomain& domain, const WeightSpec& w,
                              BoundaryCondition bc, std::size_t n, std::size_t k,
                              const SolveOptions& opts = {});

/// Neumann spectrum of the thin domain over `spec`, mu_0(eps) = 0 first.
SpectrumResult thin_spectrum(const ThinDomainSpec& spec, std::size_t nx, std::size_t nt,
                             std::size_t k, const SolveOptions& opts = {});

/// Eigenvector column `j` expanded to all mesh nodes (eliminated Dirichlet
/// nodes get 0).
std::vector<double> nodal_values(const OperatorPencil& p, const SpectrumResult& r,
                                 std::size_t j, std::size_t node_count);

// ---------------------------------------------------------------------------
// Convergence in epsilon

struct ConvergenceRow {
  double epsilon = 0.0;
  std::size_t k = 0;
  double mu_eps = 0.0;
  double mu_ref = 0.0;
  double abs_err = 0.0;
};

struct OrderFit {
  std::size_t k = 0;
  bool fitted = false;       ///< slope computed
  bool at_floor = false;     ///< every error below the floor
  bool hits_floor = false;   ///< some (not all) errors below the floor
  double order = 0.0;        ///< least-squares slope of log err vs log eps
  double floor = 0.0;
  /// mu_k(eps) <= mu_k + C eps^2 + floor on the smaller eps, with C taken
  /// from the two largest eps.
  bool one_sided_bound = true;
};

struct ConvergenceReport {
  std::vector<double> epsilons;
  std::vector<ConvergenceRow> rows;  ///< epsilon-major, then k
  std::vector<OrderFit> orders;      ///< one per k
  std::vector<double> reference;     ///< mu_k used as the limit
  std::vector<double> reference_change;  ///< |Richardson correction| per k
  std::string reference_note;
  std::vector<SolverPath> paths;     ///< solver path per epsilon
};

/// Order window for the fitted epsilon-slope in the order study.
inline constexpr double kOrderLow = 1.8;
inline constexpr double kOrderHigh = 2.3;

struct ConvergenceOptions {
  std::size_t nx = 400;
  std::size_t nt = 8;
  std::size_t k_max = 2;   ///< k = 0..k_max
  std::size_t ref_n = 2000;
  SolveOptions solve{};
};

/// Thin-domain eigenvalues against the drift limit, with least-squares order
/// per k. The reference comes from 1D drift solves at ref_n and 2 ref_n
/// elements combined by Richardson extrapolation (order 2). Throws
/// NumericError("reference not converged ...") when the Richardson correction
/// is not below a tenth of the smallest expected eps^2 signal.
ConvergenceReport convergence_study(const IntervalDomain& domain, const WeightSpec& w,
                                    const std::vector<double>& eps_list,
                                    const ConvergenceOptions& opts);

// ---------------------------------------------------------------------------
// Dirichlet gaps and the collapsing domain over phi_1^2

enum class GroundStateNorm {
  unit_l2,  ///< int phi_1^2 = 1
  unit_max  ///< max phi_1 = 1
};

struct Corollary1Report {
  ConvergenceReport convergence;      ///< mu_ref = lambda_{k+1} - lambda_1
  std::vector<double> dirichlet;      ///< lambda_1, lambda_2, ...
  double ground_state_sup_error = 0;  ///< vs sqrt(2/d) sin(pi (x - a)/d), unit L2
  bool ground_state_positive = true;
  GroundStateNorm norm = GroundStateNorm::unit_max;
  std::vector<double> max_rel_gap;    ///< per k at the smallest eps (k >= 1)
};

struct Corollary1Options {
  std::size_t n = 2000;
  std::size_t nx = 400;
  std::size_t nt = 8;
  std::size_t k_max = 2;  ///< Neumann indices 0..k_max
  GroundStateNorm norm = GroundStateNorm::unit_max;
  SolveOptions solve{};
};

Corollary1Report corollary1_harness(const IntervalDomain& domain,
                                    const std::vector<double>& eps_list,
                                    const Corollary1Options& opts);

struct Prop2Row {
  std::size_t k = 0;
  double lambda_k = 0.0;
  double lambda_gap = 0.0;  ///< lambda_k - lambda_1
  double drift_mu = 0.0;    ///< mu_{k-1} with measure phi_1^2
  double rel_mismatch = 0.0;
};

struct Prop2Report {
  std::vector<Prop2Row> rows;  ///< k = 1..k_max
  double tolerance = 0.005;
  bool passed = true;
};

/// Dirichlet gaps lambda_k - lambda_1 (phi == 0) against the Neumann drift
/// spectrum with measure phi_1^2, phi_1 the computed ground state.
Prop2Report prop2_check(const IntervalDomain& domain, std::size_t n, std::size_t k_max,
                        const SolveOptions& opts = {});

// ---------------------------------------------------------------------------
// Gap bound 3 pi^2 / d^2

enum class GapConvention {
  /// The modulus inequality as printed, on log f:
  ///   ((log f)'(y) - (log f)'(x)) sign(y - x) >= (4 pi / d) tan(pi |y - x| / d)
  paper_literal,
  /// Modulus of concavity of the drift potential log f^2:
  ///   ((log f^2)'(y) - (log f^2)'(x)) sign(y - x) <= -(4 pi / d) tan(pi |y - x| / (2 d))
  /// Equality holds for the ground state f = sin(pi x) at x + y = 1.
  model_consistent
};

struct GapPair {
  double x = 0.0;
  double y = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< >= 0 when the pair satisfies the condition
};

struct GapReport {
  double diameter = 0.0;
  GapConvention convention = GapConvention::model_consistent;
  std::vector<GapPair> pairs;
  std::size_t skipped_pairs = 0;  ///< too close to a pole of tan
  double min_margin = 0.0;
  bool condition_satisfied = false;
  std::size_t symmetric_pairs = 0;     ///< pairs with x + y = a + b
  double symmetric_max_abs_margin = 0.0;
  double drift_mu1 = 0.0;  ///< first nonzero Neumann eigenvalue, measure f^2
  double bound = 0.0;      ///< 3 pi^2 / d^2
  double tolerance = 1e-3;  ///< absolute slack on the bound
  bool bound_satisfied = false;
};

/// Tolerance on pair margins counted as satisfied.
inline constexpr double kMarginTolerance = 1e-9;

GapReport gap_check(const IntervalDomain& domain, const WeightSpec& f, std::size_t n_pairs,
                    std::size_t n, GapConvention convention,
                    const SolveOptions& opts = {});

// ---------------------------------------------------------------------------
// Eigenfunction structure near the bottom boundary

struct ResidualSample {
  double epsilon = 0.0;
  std::size_t k = 0;
  double mu_eps = 0.0;
  std::vector<double> x;       ///< base nodes
  std::vector<double> psi;     ///< bottom trace phi_{k,eps}(x, 0)
  std::vector<double> eta;     ///< -phi'(x) psi'(x)
  std::vector<double> d2y;     ///< d^2 phi_{k,eps} / dy^2 at y = 0
  std::vector<double> model_psi;  ///< drift eigenfunction psi_k on the base nodes
  double sup_residual = 0.0;   ///< max over interior nodes |d2y - (log f)' psi'|
  double l2_model_distance = 0.0;  ///< ||phi - a U_k|| / ||phi||, a the M-projection
};

struct ResidualReport {
  std::vector<ResidualSample> samples;  ///< in eps order
  bool residual_decreasing = false;
  bool distance_decreasing = false;
};

ResidualReport eigenfunction_residual(const IntervalDomain& domain, const WeightSpec& w,
                                      const std::vector<double>& eps_list, std::size_t nx,
                                      std::size_t nt, std::size_t k,
                                      const SolveOptions& opts = {});

// ---------------------------------------------------------------------------
// Partial sums of Rayleigh quotients over weighted-orthogonal trial sets

struct Prop4Trial {
  std::size_t index = 0;
  bool eigenvectors = false;  ///< trial set is the eigenvectors themselves
  double sum_mu = 0.0;
  double sum_rayleigh = 0.0;
  double margin = 0.0;        ///< sum_rayleigh - sum_mu
};

struct Prop4Report {
  std::size_t k = 0;  ///< sums over j = 0..k
  std::vector<Prop4Trial> trials;
  bool inequality_holds = true;
  double equality_error = 0.0;  ///< relative, eigenvector trial
  bool equality_holds = true;
};

Prop4Report prop4_check(const IntervalDomain& domain, const WeightSpec& w, std::size_t n,
                        std::size_t k, std::size_t trials, std::uint64_t seed,
                        const SolveOptions& opts = {});

// ---------------------------------------------------------------------------
// Helpers shared with the CLI

/// Throws ConfigError unless the list is non-empty, positive, strictly
/// descending and geometric (constant ratio to 1e-9 relative).
void validate_epsilon_list(const std::vector<double>& eps, std::size_t min_points);

/// Least-squares slope of log(err) against log(eps).
double fit_order(const std::vector<double>& eps, const std::vector<double>& err);

}  // namespace driftspec
