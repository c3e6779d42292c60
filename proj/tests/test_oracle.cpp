#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "driftspec/experiments.hpp"
#include "oracles.hpp"

using namespace driftspec;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Oracle, ShootingReproducesClosedForms) {
  // phi = x: u'' - u' + mu u = 0 with Neumann ends gives k^2 pi^2 + 1/4.
  const auto drift = oracle::shooting_eigenvalues([](double) { return 1.0; }, 0, 1,
                                                  oracle::Boundary::neumann, 4);
  for (std::size_t k = 1; k <= 4; ++k) {
    EXPECT_NEAR(drift[k - 1], k * k * kPi * kPi + 0.25, 1e-9 * k * k * kPi * kPi);
  }
  const auto dir = oracle::shooting_eigenvalues([](double) { return 0.0; }, 0, 1,
                                                oracle::Boundary::dirichlet, 3);
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_NEAR(dir[k - 1], k * k * kPi * kPi, 1e-8);
}

TEST(Oracle, FemMatchesShootingForNonlinearPotential) {
  // phi = x^2 on [0, 1.5]: no closed form, shooting is the reference.
  const auto ref = oracle::shooting_eigenvalues([](double x) { return 2 * x; }, 0, 1.5,
                                                oracle::Boundary::neumann, 3);
  const SpectrumResult r = drift_spectrum(IntervalDomain(0, 1.5), WeightSpec::from_phi_text("x^2"),
                                          BoundaryCondition::neumann, 1500, 4);
  for (std::size_t k = 1; k <= 3; ++k) {
    EXPECT_NEAR(r.eigenvalues[k] / ref[k - 1], 1.0, 1e-5) << k;
  }
}
