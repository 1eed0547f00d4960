#pragma once
// Simulation DGP: AR(1)/VAR(1) regressors with individual drifts, jointly
// normal innovations, and fixed effects correlated with the regressors.

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "ivxj/panel.hpp"

namespace ivxj {

// Counter-derived RNG substream: replication r of a run with master seed s
// always uses the same engine state, independent of scheduling order.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t counter);

struct SimulationSpec {
  int n = 0;
  int T = 0;
  Eigen::VectorXd rho_star;   // length k (diagonal of R*)
  Eigen::VectorXd beta_star;  // length k
  Eigen::MatrixXd omega;      // (k+1) x (k+1) innovation covariance, SPD
  double alpha_sd = 1.0;      // alpha_i ~ N(0, alpha_sd^2) per coordinate
  double delta0_sd = 1.0;     // delta_{i,0} ~ N(0, delta0_sd^2) per coordinate
  bool fe_time_average = true;  // mu_{y,i} = (kT)^{-1} sum_j sum_t x_{j,i,t}
  int reps = 2000;
  std::uint64_t seed = 0;

  int k() const { return static_cast<int>(rho_star.size()); }
  void validate() const;

  // Convenience constructor for the univariate grid.
  static SimulationSpec univariate(int n, int T, double rho, double beta,
                                   double omega12, int reps, std::uint64_t seed);
};

// Draw one panel. Deterministic given (spec, rng state); series are stored
// with the true presample value at index 0 (see panel.hpp).
Panel simulate_panel(const SimulationSpec& spec, std::mt19937_64& rng);

}  // namespace ivxj
