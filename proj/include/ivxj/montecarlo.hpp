#pragma once
// Deterministic, parallel Monte Carlo harness.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ivxj/inference.hpp"
#include "ivxj/simulate.hpp"

namespace ivxj {

struct MonteCarloSummary {
  std::string cell;        // human-readable cell label
  std::string estimator;   // variant name
  double bias = 0.0;       // mean(beta_hat - beta*)
  double rmse = 0.0;       // sqrt(mean((beta_hat - beta*)^2))
  double coverage = 0.0;   // fraction with |t| <= 1.96
  double mc_se_bias = 0.0; // sd / sqrt(m)
  double mc_se_cov = 0.0;  // sqrt(p(1-p)/m)
  int reps_used = 0;
  int failures = 0;
};

struct MultSummary {
  std::string cell;
  int horizon = 1;
  double size = 0.0;       // Wald rejection rate at 5% nominal
  double norm_bias = 0.0;  // || mean(beta_hat - beta*) ||
  double msq_error = 0.0;  // mean(||.||^2), as printed in the source table
  double rmse_norm = 0.0;  // sqrt of the above (true root variant)
  double mc_se_size = 0.0;
  int reps_used = 0;
  int failures = 0;
};

// Run every spec against the requested variants; replication r of cell c uses
// substream(spec.seed, r), so results are independent of worker count.
std::vector<MonteCarloSummary> run_grid(
    const std::vector<SimulationSpec>& specs,
    const std::vector<std::pair<Base, RhoMethod>>& estimators, int reps,
    int workers, const IvxConfig& config = {},
    const std::vector<std::string>& cell_labels = {});

// Multivariate grid: one random Omega* drawn from substream(seed, 0) and
// shared across all cells; per (n=T, h) Wald size under H0: beta^(h) = 0.
std::vector<MultSummary> run_mult_grid(const std::vector<int>& sizes,
                                       const std::vector<int>& horizons,
                                       int reps, std::uint64_t seed, int workers,
                                       const IvxConfig& config = {});

// Deterministic parallel map: fn(r) for r = 0..reps-1 on `workers` threads.
void parallel_for(int reps, int workers, const std::function<void(int)>& fn);

}  // namespace ivxj
