// drift-spectra: runs one experiment from a config file or from flags.
//
//   drift-spectra run configs/converge_phi_x.cfg
//   drift-spectra drift --phi x --domain 0 1 --n 2000 --k 5 --csv out.csv

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifdef DRIFTSPEC_SINGLE_HEADER_CLI11
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "driftspec/config.hpp"
#include "driftspec/error.hpp"
#include "driftspec/jobs.hpp"

namespace {

using driftspec::JobConfig;
using driftspec::JobKind;

/// Flag values before they are folded into a JobConfig.
struct Flags {
  std::optional<std::string> phi;
  std::optional<std::string> f;
  std::vector<double> domain{0.0, 1.0};
  std::vector<double> eps;
  std::optional<std::size_t> nx, nt, n, k;
  std::optional<double> tol;
  std::optional<std::string> solver, convention, phi1_norm, preconditioner;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> ref_n, pairs, mode, trials;
  std::string csv, json;
};

void add_common(CLI::App* sub, Flags& fl) {
  sub->add_option("--domain", fl.domain, "Base interval endpoints a b")->expected(2);
  sub->add_option("--tol", fl.tol, "Eigensolver residual tolerance (default 1e-8)");
  sub->add_option("--solver", fl.solver, "auto, dense or iterative");
  sub->add_option("--preconditioner", fl.preconditioner, "cholesky or jacobi");
  sub->add_option("--seed", fl.seed, "Seed for random start blocks and trials (default 42)");
  sub->add_option("--csv", fl.csv, "Write the result table as CSV");
  sub->add_option("--json", fl.json, "Write the full report as JSON");
}

void add_weight(CLI::App* sub, Flags& fl) {
  sub->add_option("--phi", fl.phi, "Potential phi(x); the weight is exp(-phi)");
  sub->add_option("--f", fl.f, "Weight / height profile f(x)");
}

JobConfig to_config(JobKind kind, const Flags& fl) {
  JobConfig cfg;
  cfg.kind = kind;
  cfg.a = fl.domain.at(0);
  cfg.b = fl.domain.at(1);
  cfg.phi = fl.phi;
  cfg.f = fl.f;
  cfg.epsilon = fl.eps;
  if (fl.nx) cfg.nx = *fl.nx;
  if (fl.nt) cfg.nt = *fl.nt;
  cfg.n = fl.n;
  cfg.num_eigs = fl.k;
  if (fl.tol) cfg.tol = *fl.tol;
  if (fl.solver) cfg.solver = driftspec::parse_solver(*fl.solver);
  if (fl.seed) cfg.seed = *fl.seed;
  if (fl.convention) cfg.convention = driftspec::parse_convention(*fl.convention);
  if (fl.phi1_norm) cfg.phi1_norm = driftspec::parse_ground_state_norm(*fl.phi1_norm);
  if (fl.preconditioner) cfg.preconditioner = driftspec::parse_preconditioner(*fl.preconditioner);
  if (fl.ref_n) cfg.ref_n = *fl.ref_n;
  if (fl.pairs) cfg.pairs = *fl.pairs;
  if (fl.mode) cfg.mode = *fl.mode;
  if (fl.trials) cfg.trials = *fl.trials;
  cfg.csv = fl.csv;
  cfg.json = fl.json;
  driftspec::validate_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of drift Laplacians and collapsing thin domains"};
  app.set_version_flag("--version", std::string(driftspec::version()));
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "Run the job described by a config file");
  run->add_option("config", config_path, "Config file")->required();

  Flags fl;
  struct Entry {
    JobKind kind;
    CLI::App* app;
  };
  std::vector<Entry> jobs;
  auto job = [&](JobKind kind, const char* help) {
    CLI::App* sub = app.add_subcommand(std::string(driftspec::to_string(kind)), help);
    add_common(sub, fl);
    jobs.push_back({kind, sub});
    return sub;
  };

  CLI::App* drift = job(JobKind::drift, "Neumann drift spectrum on the base interval");
  add_weight(drift, fl);
  drift->add_option("--n", fl.n, "Elements (default 2000)");
  drift->add_option("--k", fl.k, "Number of eigenvalues (default 5)");

  CLI::App* dirichlet = job(JobKind::dirichlet, "Dirichlet spectrum (phi = 0 unless given)");
  add_weight(dirichlet, fl);
  dirichlet->add_option("--n", fl.n, "Elements (default 2000)");
  dirichlet->add_option("--k", fl.k, "Number of eigenvalues (default 5)");

  CLI::App* thin = job(JobKind::thin, "Neumann spectrum of the thin domain");
  add_weight(thin, fl);
  thin->add_option("--eps", fl.eps, "Thickness epsilon")->expected(1);
  thin->add_option("--nx", fl.nx, "Cells along the base (default 400)");
  thin->add_option("--nt", fl.nt, "Cells across the thickness (default 8)");
  thin->add_option("--k", fl.k, "Number of eigenvalues (default 5)");

  CLI::App* converge = job(JobKind::converge, "Order of mu_k(eps) -> mu_k");
  add_weight(converge, fl);
  converge->add_option("--eps", fl.eps, "Descending geometric list, >= 4 values");
  converge->add_option("--nx", fl.nx, "Cells along the base (default 400)");
  converge->add_option("--nt", fl.nt, "Cells across the thickness (default 8)");
  converge->add_option("--k", fl.k, "Indices 0..k-1 (default 3)");
  converge->add_option("--ref-n", fl.ref_n, "Reference 1D elements (default 2000)");

  CLI::App* cor = job(JobKind::corollary1, "Thin domain over phi_1^2 vs Dirichlet gaps");
  cor->add_option("--eps", fl.eps, "Descending epsilon list");
  cor->add_option("--n", fl.n, "Dirichlet elements (default 2000)");
  cor->add_option("--nx", fl.nx, "Cells along the base (default 400)");
  cor->add_option("--nt", fl.nt, "Cells across the thickness (default 8)");
  cor->add_option("--k", fl.k, "Indices 0..k-1 (default 3)");
  cor->add_option("--phi1-norm", fl.phi1_norm, "unit-max (default) or unit-l2");

  CLI::App* prop2 = job(JobKind::prop2, "Dirichlet gaps vs drift spectrum of phi_1^2");
  prop2->add_option("--n", fl.n, "Elements (default 2000)");
  prop2->add_option("--k", fl.k, "Dirichlet indices 1..k (default 3)");

  CLI::App* gap = job(JobKind::gapcheck, "Modulus condition and the 3 pi^2 / d^2 bound");
  add_weight(gap, fl);
  gap->add_option("--n", fl.n, "Elements for the drift solve (default 2000)");
  gap->add_option("--pairs", fl.pairs, "Sample points; all pairs are checked (default 40)");
  gap->add_option("--convention", fl.convention, "model-consistent (default) or paper-literal");

  CLI::App* residual = job(JobKind::residual, "Boundary-layer residual of thin eigenfunctions");
  add_weight(residual, fl);
  residual->add_option("--eps", fl.eps, "Descending geometric list, >= 2 values");
  residual->add_option("--nx", fl.nx, "Cells along the base (default 400)");
  residual->add_option("--nt", fl.nt, "Cells across the thickness (default 8)");
  residual->add_option("--mode", fl.mode, "Eigenfunction index (default 1)");

  CLI::App* prop4 = job(JobKind::prop4, "Partial sums of Rayleigh quotients");
  add_weight(prop4, fl);
  prop4->add_option("--n", fl.n, "Elements (default 400)");
  prop4->add_option("--k", fl.k, "Sum over j = 0..k-1 (default 4)");
  prop4->add_option("--trials", fl.trials, "Random trial sets (default 100)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "drift-spectra: error: " << e.what() << '\n';
    return driftspec::kExitConfigError;
  }

  JobConfig cfg;
  try {
    if (run->parsed()) {
      cfg = driftspec::load_config(config_path);
    } else {
      for (const Entry& e : jobs) {
        if (e.app->parsed()) cfg = to_config(e.kind, fl);
      }
    }
  } catch (const driftspec::Error& e) {
    std::cerr << "drift-spectra: error: " << e.what() << '\n';
    return driftspec::kExitConfigError;
  }
  return driftspec::run_job(cfg, std::cout, std::cerr);
}
