#include "ivxj/simulate.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace ivxj {

namespace {
// SplitMix64 finalizer; decorrelates (seed, counter) pairs before seeding.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t counter) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(counter * 0xD6E8FEB86659FD93ULL + 1)));
}

void SimulationSpec::validate() const {
  if (n < 1 || T < 6) throw InputError("SimulationSpec: need n >= 1 and T >= 6");
  const int kk = k();
  if (kk < 1 || beta_star.size() != kk)
    throw InputError("SimulationSpec: rho_star/beta_star length mismatch");
  if (omega.rows() != kk + 1 || omega.cols() != kk + 1)
    throw InputError("SimulationSpec: omega must be (k+1) x (k+1)");
  if (!omega.isApprox(omega.transpose(), 1e-12))
    throw InputError("invalid covariance: omega not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success)
    throw InputError("invalid covariance: omega not positive definite");
  if (reps < 1) throw InputError("SimulationSpec: reps must be >= 1");
}

SimulationSpec SimulationSpec::univariate(int n, int T, double rho, double beta,
                                          double omega12, int reps,
                                          std::uint64_t seed) {
  SimulationSpec s;
  s.n = n;
  s.T = T;
  s.rho_star = Eigen::VectorXd::Constant(1, rho);
  s.beta_star = Eigen::VectorXd::Constant(1, beta);
  s.omega.resize(2, 2);
  s.omega << 1.0, omega12, omega12, 1.0;
  s.reps = reps;
  s.seed = seed;
  return s;
}

Panel simulate_panel(const SimulationSpec& spec, std::mt19937_64& rng) {
  spec.validate();
  const int k = spec.k();
  const int T = spec.T;
  Eigen::LLT<Eigen::MatrixXd> llt(spec.omega);
  const Eigen::MatrixXd L = llt.matrixL();

  std::normal_distribution<double> stdnorm(0.0, 1.0);
  Panel panel;
  panel.individuals.resize(static_cast<std::size_t>(spec.n));

  Eigen::VectorXd g(k + 1), w(k + 1), delta(k), alpha(k);
  for (int i = 0; i < spec.n; ++i) {
    auto& ind = panel.individuals[static_cast<std::size_t>(i)];
    ind.id = "i" + std::to_string(i + 1);
    ind.times.resize(static_cast<std::size_t>(T) + 1);
    for (int t = 0; t <= T; ++t) ind.times[static_cast<std::size_t>(t)] = t;
    ind.x.assign(static_cast<std::size_t>(k),
                 std::vector<double>(static_cast<std::size_t>(T) + 1, 0.0));
    ind.y.assign(static_cast<std::size_t>(T) + 1, 0.0);

    // Fixed draw order: alpha, delta_0, then one innovation vector per period.
    for (int j = 0; j < k; ++j) alpha(j) = spec.alpha_sd * stdnorm(rng);
    for (int j = 0; j < k; ++j) delta(j) = spec.delta0_sd * stdnorm(rng);
    for (int j = 0; j < k; ++j)
      ind.x[static_cast<std::size_t>(j)][0] = alpha(j) + delta(j);

    std::vector<double> e(static_cast<std::size_t>(T) + 1, 0.0);
    for (int t = 1; t <= T; ++t) {
      for (int j = 0; j <= k; ++j) g(j) = stdnorm(rng);
      w.noalias() = L * g;  // w(0) = e_t, w(1..k) = v_t
      e[static_cast<std::size_t>(t)] = w(0);
      for (int j = 0; j < k; ++j) {
        delta(j) = spec.rho_star(j) * delta(j) + w(j + 1);
        ind.x[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] =
            alpha(j) + delta(j);
      }
    }

    double mu_y = 0.0;
    if (spec.fe_time_average) {
      double s = 0.0;
      for (int j = 0; j < k; ++j)
        for (int t = 1; t <= T; ++t)
          s += ind.x[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
      mu_y = s / (static_cast<double>(k) * static_cast<double>(T));
    }
    for (int t = 1; t <= T; ++t) {
      double xb = 0.0;
      for (int j = 0; j < k; ++j)
        xb += spec.beta_star(j) *
              ind.x[static_cast<std::size_t>(j)][static_cast<std::size_t>(t - 1)];
      ind.y[static_cast<std::size_t>(t)] = mu_y + xb + e[static_cast<std::size_t>(t)];
    }
  }
  return panel;
}

}  // namespace ivxj
