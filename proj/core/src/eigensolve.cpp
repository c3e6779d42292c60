#include "driftspec/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "driftspec/dense_linalg.hpp"
#include "driftspec/error.hpp"

namespace driftspec {

std::string_view to_string(SolverPath p) {
  return p == SolverPath::dense ? "dense" : "iterative";
}

std::string_view to_string(SolverChoice c) {
  switch (c) {
    case SolverChoice::automatic:
      return "auto";
    case SolverChoice::dense:
      return "dense";
    case SolverChoice::iterative:
      return "iterative";
  }
  return "auto";
}

std::string_view to_string(PreconditionerKind k) {
  return k == PreconditionerKind::jacobi ? "jacobi" : "cholesky";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void normalize_columns(const SparseMatrix& mass, MatrixXd& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double norm = std::sqrt(v.col(j).dot(mass * v.col(j)));
    if (norm > 0.0) v.col(j) /= norm;
    Eigen::Index at = 0;
    v.col(j).cwiseAbs().maxCoeff(&at);
    if (v(at, j) < 0.0) v.col(j) = -v.col(j);
  }
}

class Preconditioner {
 public:
  Preconditioner(const OperatorPencil& p, PreconditionerKind kind) : kind_(kind) {
    double trace_k = 0.0;
    double trace_m = 0.0;
    for (Eigen::Index i = 0; i < p.stiffness.rows(); ++i) {
      trace_k += p.stiffness.coeff(i, i);
      trace_m += p.mass.coeff(i, i);
    }
    // K has the constants in its kernel for Neumann problems; the shift
    // keeps K + sigma M positive definite.
    shift_ = 1e-3 * trace_k / trace_m;
    if (!(shift_ > 0.0)) shift_ = 1e-3;
    const SparseMatrix shifted = p.stiffness + shift_ * p.mass;
    if (kind_ == PreconditionerKind::jacobi) {
      inverse_diagonal_ = shifted.diagonal().cwiseInverse();
    } else {
      factor_ = std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
      factor_->compute(Eigen::SparseMatrix<double>(shifted));
      if (factor_->info() != Eigen::Success) {
        throw NumericError("preconditioner factorization of K + sigma M failed");
      }
    }
  }

  MatrixXd apply(const MatrixXd& r) const {
    if (kind_ == PreconditionerKind::jacobi) {
      return inverse_diagonal_.asDiagonal() * r;
    }
    return factor_->solve(r);
  }

 private:
  PreconditionerKind kind_;
  double shift_ = 0.0;
  VectorXd inverse_diagonal_;
  std::unique_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> factor_;
};

// M-orthonormalizes the columns of y (singular value QB), dropping directions
// whose Gram eigenvalue falls below drop * largest.
MatrixXd svqb(const SparseMatrix& mass, const MatrixXd& y, double drop) {
  if (y.cols() == 0) return y;
  const MatrixXd my = mass * y;
  MatrixXd gram = y.transpose() * my;
  gram = 0.5 * (gram + gram.transpose()).eval();
  VectorXd d = gram.diagonal();
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = d(i) > 0.0 ? 1.0 / std::sqrt(d(i)) : 0.0;
  const MatrixXd scaled = d.asDiagonal() * gram * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(scaled);
  const VectorXd& theta = es.eigenvalues();
  const double top = theta.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (theta(i) > drop * top && theta(i) > 0.0) keep.push_back(i);
  }
  MatrixXd basis(y.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const Eigen::Index i = keep[c];
    basis.col(static_cast<Eigen::Index>(c)) =
        y * (d.asDiagonal() * es.eigenvectors().col(i)) / std::sqrt(theta(i));
  }
  return basis;
}

MatrixXd random_block(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  MatrixXd x(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = dist(rng);
  }
  return x;
}

// S^T K S in edge-difference form,
//   x^T K y = sum_i s_i x_i y_i - sum_{i<j} K_ij (x_i - x_j)(y_i - y_j),
// with s_i the row sums of K. For Neumann stiffness the s_i vanish and the
// form avoids the cancellation in x^T (K x) for smooth x. Exact row sums
// recorded by the assembler take precedence over the rounded ones in K.
class EnergyForm {
 public:
  explicit EnergyForm(const OperatorPencil& p) : row_sum_(p.stiffness.rows()) {
    const SparseMatrix& k = p.stiffness;
    const bool exact = p.row_sums.size() == static_cast<std::size_t>(k.rows());
    for (Eigen::Index i = 0; i < k.outerSize(); ++i) {
      double s = 0.0;
      for (SparseMatrix::InnerIterator it(k, i); it; ++it) {
        s += it.value();
        if (it.col() > i) edges_.push_back({i, it.col(), it.value()});
      }
      row_sum_(i) = exact ? p.row_sums[static_cast<std::size_t>(i)] : s;
    }
  }

  MatrixXd project(const MatrixXd& s) const {
    MatrixXd h = s.transpose() * row_sum_.asDiagonal() * s;
    Eigen::RowVectorXd d(s.cols());
    for (const Edge& e : edges_) {
      d = s.row(e.i) - s.row(e.j);
      h.noalias() -= e.value * (d.transpose() * d);
    }
    return h;
  }

 private:
  struct Edge {
    Eigen::Index i;
    Eigen::Index j;
    double value;
  };
  VectorXd row_sum_;
  std::vector<Edge> edges_;
};

double backward_error(const VectorXd& r, double mu, double norm_k, double norm_m,
                      double vnorm) {
  const double scale = (norm_k + std::abs(mu) * norm_m) * vnorm;
  return scale > 0.0 ? r.norm() / scale : r.norm();
}

}  // namespace

void finalize_spectrum(const OperatorPencil& p, SpectrumResult& r) {
  const double norm_k = norm_inf(p.stiffness);
  const double norm_m = norm_inf(p.mass);
  const auto k = static_cast<Eigen::Index>(r.eigenvalues.size());
  r.residuals.assign(r.eigenvalues.size(), 0.0);
  for (Eigen::Index j = 0; j < k; ++j) {
    const VectorXd v = r.eigenvectors.col(j);
    const double mu = r.eigenvalues[static_cast<std::size_t>(j)];
    const VectorXd res = p.stiffness * v - mu * (p.mass * v);
    r.residuals[static_cast<std::size_t>(j)] = backward_error(res, mu, norm_k, norm_m, v.norm());
  }
  r.cluster.assign(r.eigenvalues.size(), 0);
  double largest = 0.0;
  for (double mu : r.eigenvalues) largest = std::max(largest, std::abs(mu));
  int id = 0;
  for (std::size_t j = 1; j < r.eigenvalues.size(); ++j) {
    if (r.eigenvalues[j] - r.eigenvalues[j - 1] >= 1e-8 * largest) ++id;
    r.cluster[j] = id;
  }
}

SpectrumResult solve_dense(const OperatorPencil& p, std::size_t k, std::size_t dense_cap) {
  const std::size_t n = p.dof_count();
  if (n > dense_cap) {
    std::ostringstream msg;
    msg << "dense solve requested for " << n << " dofs (cap " << dense_cap << ")";
    throw NumericError(msg.str());
  }
  if (k > n) throw NumericError("more eigenpairs requested than degrees of freedom");

  const MatrixXd kd = MatrixXd(p.stiffness);
  const MatrixXd md = MatrixXd(p.mass);
  const MatrixXd l = cholesky_lower(md);
  const auto lower = l.triangularView<Eigen::Lower>();
  const MatrixXd half = lower.solve(kd);  // L^{-1} K
  MatrixXd c = lower.solve(half.transpose());  // L^{-1} K L^{-T}
  c = 0.5 * (c + c.transpose()).eval();

  const SymmetricEigen eig = jacobi_eigen(std::move(c));

  SpectrumResult r;
  r.path = SolverPath::dense;
  r.iterations = eig.sweeps;
  r.converged = true;
  const auto kk = static_cast<Eigen::Index>(k);
  r.eigenvalues.assign(eig.values.data(), eig.values.data() + kk);
  r.eigenvectors = l.transpose().triangularView<Eigen::Upper>().solve(eig.vectors.leftCols(kk));
  normalize_columns(p.mass, r.eigenvectors);
  finalize_spectrum(p, r);
  return r;
}

SpectrumResult solve_iterative(const OperatorPencil& p, std::size_t k, const SolveOptions& opts) {
  const auto n = static_cast<Eigen::Index>(p.dof_count());
  if (k == 0) throw NumericError("iterative solve needs k >= 1");
  if (!(opts.tol > 0.0)) throw NumericError("iterative solve needs tol > 0");
  if (static_cast<Eigen::Index>(k) > n) {
    throw NumericError("more eigenpairs requested than degrees of freedom");
  }
  const auto kk = static_cast<Eigen::Index>(k);
  const Eigen::Index m = std::min<Eigen::Index>(kk + static_cast<Eigen::Index>(opts.guard_vectors), n);

  const SparseMatrix& kmat = p.stiffness;
  const SparseMatrix& mmat = p.mass;
  const double norm_k = norm_inf(kmat);
  const double norm_m = norm_inf(mmat);
  const Preconditioner precond(p, opts.preconditioner);
  const EnergyForm energy(p);

  MatrixXd x;
  for (int attempt = 0;; ++attempt) {
    x = svqb(mmat, random_block(n, m, opts.seed + static_cast<std::uint64_t>(attempt)), 1e-14);
    if (x.cols() == m) break;
    if (attempt == 1) throw NumericError("LOBPCG breakdown: start block is rank deficient");
  }

  auto rayleigh_ritz = [&](const MatrixXd& s, Eigen::Index keep, VectorXd& values) {
    MatrixXd h = energy.project(s);
    h = 0.5 * (h + h.transpose()).eval();
    MatrixXd g = s.transpose() * (mmat * s);
    g = 0.5 * (g + g.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(h, g);
    if (es.info() != Eigen::Success) {
      throw NumericError("LOBPCG breakdown: projected problem is not definite");
    }
    values = es.eigenvalues().head(keep);
    return MatrixXd(es.eigenvectors().leftCols(keep));
  };

  VectorXd lambda;
  x = x * rayleigh_ritz(x, m, lambda);
  MatrixXd p_dir;  // conjugate directions, one per column of x
  std::vector<double> res(static_cast<std::size_t>(m), 0.0);

  SpectrumResult out;
  out.path = SolverPath::iterative;
  out.converged = false;

  int it = 0;
  for (;;) {
    const MatrixXd kx = kmat * x;
    const MatrixXd mx = mmat * x;
    const MatrixXd r = kx - mx * lambda.asDiagonal();
    std::vector<Eigen::Index> active;
    bool wanted_done = true;
    for (Eigen::Index j = 0; j < m; ++j) {
      res[static_cast<std::size_t>(j)] =
          backward_error(r.col(j), lambda(j), norm_k, norm_m, x.col(j).norm());
      const bool done = res[static_cast<std::size_t>(j)] <= opts.tol;
      if (!done) active.push_back(j);
      if (j < kk && !done) wanted_done = false;
    }
    if (wanted_done) {
      out.converged = true;
      break;
    }
    if (it == opts.max_iterations) break;
    ++it;

    const auto na = static_cast<Eigen::Index>(active.size());
    const Eigen::Index np = p_dir.cols() > 0 ? na : 0;
    MatrixXd y(n, na + np);
    for (Eigen::Index c = 0; c < na; ++c) y.col(c) = r.col(active[static_cast<std::size_t>(c)]);
    y.leftCols(na) = precond.apply(y.leftCols(na));
    for (Eigen::Index c = 0; c < np; ++c) {
      y.col(na + c) = p_dir.col(active[static_cast<std::size_t>(c)]);
    }
    for (int pass = 0; pass < 2; ++pass) y -= x * (mx.transpose() * y);
    y = svqb(mmat, y, 1e-12);

    MatrixXd s(n, m + y.cols());
    s.leftCols(m) = x;
    s.rightCols(y.cols()) = y;
    const MatrixXd coef = rayleigh_ritz(s, m, lambda);
    x = s * coef;
    p_dir = y * coef.bottomRows(y.cols());
  }

  // Final projection onto the block alone: the search directions carry large
  // Rayleigh quotients that limit the absolute accuracy of the last step.
  x = x * rayleigh_ritz(x, m, lambda);

  out.iterations = it;
  out.eigenvalues.assign(lambda.data(), lambda.data() + kk);
  out.eigenvectors = x.leftCols(kk);
  normalize_columns(mmat, out.eigenvectors);
  finalize_spectrum(p, out);
  return out;
}

SpectrumResult solve_smallest(const OperatorPencil& p, std::size_t k, const SolveOptions& opts) {
  const bool dense = opts.solver == SolverChoice::dense ||
                     (opts.solver == SolverChoice::automatic && p.dof_count() <= opts.dense_cap);
  if (k == 0) {
    SpectrumResult empty;
    empty.path = dense ? SolverPath::dense : SolverPath::iterative;
    empty.eigenvectors.resize(static_cast<Eigen::Index>(p.dof_count()), 0);
    return empty;
  }
  if (dense) {
    return solve_dense(p, k, std::max(opts.dense_cap, opts.solver == SolverChoice::dense
                                                          ? p.dof_count()
                                                          : opts.dense_cap));
  }
  return solve_iterative(p, k, opts);
}

double rayleigh_quotient(const OperatorPencil& p, const Eigen::VectorXd& v) {
  const EnergyForm energy(p);
  const MatrixXd h = energy.project(v);
  return h(0, 0) / v.dot(p.mass * v);
}

void rescale_to_volume(SpectrumResult& r, double volume) {
  if (!(volume > 0.0)) throw NumericError("normalization volume must be positive");
  r.eigenvectors *= std::sqrt(volume);
}

}  // namespace driftspec
