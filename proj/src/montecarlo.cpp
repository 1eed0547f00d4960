#include "ivxj/montecarlo.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "ivxj/long_horizon.hpp"

namespace ivxj {

void parallel_for(int reps, int workers, const std::function<void(int)>& fn) {
  if (workers < 1) workers = 1;
  if (workers == 1 || reps <= 1) {
    for (int r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= reps) return;
        try {
          fn(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::string default_cell_label(const SimulationSpec& spec) {
  std::ostringstream os;
  os << "n=" << spec.n << ",T=" << spec.T;
  if (spec.k() == 1) {
    os << ",rho=" << spec.rho_star(0) << ",omega12=" << spec.omega(0, 1);
  } else {
    os << ",k=" << spec.k();
  }
  return os.str();
}

}  // namespace

std::vector<MonteCarloSummary> run_grid(
    const std::vector<SimulationSpec>& specs,
    const std::vector<std::pair<Base, RhoMethod>>& estimators, int reps,
    int workers, const IvxConfig& config,
    const std::vector<std::string>& cell_labels) {
  if (specs.empty()) throw InputError("run_grid: no simulation cells");
  if (estimators.empty()) throw InputError("run_grid: no estimators requested");
  if (reps < 1) throw InputError("run_grid: reps must be >= 1");
  if (!cell_labels.empty() && cell_labels.size() != specs.size())
    throw InputError("run_grid: cell_labels size mismatch");

  const std::size_t V = estimators.size();
  // Map requested variants onto positions in estimate_all's fixed order.
  std::vector<std::size_t> slot(V);
  for (std::size_t v = 0; v < V; ++v) {
    std::size_t found = kAllVariants.size();
    for (std::size_t a = 0; a < kAllVariants.size(); ++a)
      if (kAllVariants[a] == estimators[v]) found = a;
    if (found == kAllVariants.size())
      throw InputError("run_grid: unknown estimator variant");
    slot[v] = found;
  }

  std::vector<MonteCarloSummary> out;
  out.reserve(specs.size() * V);
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const SimulationSpec& spec = specs[c];
    spec.validate();
    if (spec.k() != 1)
      throw InputError("run_grid: univariate grid requires k = 1 cells");
    const std::string label =
        cell_labels.empty() ? default_cell_label(spec) : cell_labels[c];

    // Index-addressed per-replication storage keeps results independent of
    // worker scheduling.
    std::vector<double> beta(static_cast<std::size_t>(reps) * V, 0.0);
    std::vector<unsigned char> covered(static_cast<std::size_t>(reps) * V, 0);
    std::vector<unsigned char> ok(static_cast<std::size_t>(reps), 0);

    parallel_for(reps, workers, [&](int r) {
      std::mt19937_64 rng = substream(spec.seed, static_cast<std::uint64_t>(r));
      const Panel panel = simulate_panel(spec, rng);
      try {
        const auto all = estimate_all(panel, config);
        for (std::size_t v = 0; v < V; ++v) {
          const Estimate& est = all[slot[v]];
          beta[static_cast<std::size_t>(r) * V + v] = est.beta_hat;
          covered[static_cast<std::size_t>(r) * V + v] =
              std::abs(est.t_stat) <= 1.96 ? 1 : 0;
        }
        ok[static_cast<std::size_t>(r)] = 1;
      } catch (const NumericError&) {
        // leave ok = 0; the replication is excluded and counted as a failure
      }
    });

    const double beta_star = spec.beta_star(0);
    for (std::size_t v = 0; v < V; ++v) {
      MonteCarloSummary s;
      s.cell = label;
      s.estimator = variant_name(estimators[v].first, estimators[v].second);
      double sum = 0.0, sumsq = 0.0;
      int m = 0, cov = 0, failures = 0;
      for (int r = 0; r < reps; ++r) {
        if (!ok[static_cast<std::size_t>(r)]) {
          ++failures;
          continue;
        }
        const double err = beta[static_cast<std::size_t>(r) * V + v] - beta_star;
        sum += err;
        sumsq += err * err;
        cov += covered[static_cast<std::size_t>(r) * V + v];
        ++m;
      }
      if (m == 0) throw NumericError("run_grid: all replications failed in " + label);
      s.reps_used = m;
      s.failures = failures;
      s.bias = sum / m;
      s.rmse = std::sqrt(sumsq / m);
      s.coverage = static_cast<double>(cov) / m;
      const double var = sumsq / m - s.bias * s.bias;
      s.mc_se_bias = std::sqrt(std::max(var, 0.0) / m);
      s.mc_se_cov = std::sqrt(s.coverage * (1.0 - s.coverage) / m);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<MultSummary> run_mult_grid(const std::vector<int>& sizes,
                                       const std::vector<int>& horizons,
                                       int reps, std::uint64_t seed, int workers,
                                       const IvxConfig& config) {
  if (sizes.empty() || horizons.empty())
    throw InputError("run_mult_grid: empty grid");
  if (reps < 1) throw InputError("run_mult_grid: reps must be >= 1");
  const int k = 5;
  Eigen::VectorXd rho_star(k);
  rho_star << 0.60, 0.95, 0.99, 1.00, 1.01;

  // One random innovation covariance shared across the whole grid:
  // Omega* = W W' + D, normalized to a unit diagonal.
  std::mt19937_64 omega_rng = substream(seed, 0);
  std::normal_distribution<double> stdnorm(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd W(k + 1, k + 1);
  for (int r = 0; r < k + 1; ++r)
    for (int c = 0; c < k + 1; ++c) W(r, c) = stdnorm(omega_rng);
  Eigen::VectorXd D(k + 1);
  for (int r = 0; r < k + 1; ++r) D(r) = unif(omega_rng);
  Eigen::MatrixXd Omega = W * W.transpose();
  Omega.diagonal() += D;
  const Eigen::VectorXd scale = Omega.diagonal().cwiseSqrt().cwiseInverse();
  Omega = scale.asDiagonal() * Omega * scale.asDiagonal();

  const boost::math::chi_squared chi2(static_cast<double>(k));
  const double crit = boost::math::quantile(chi2, 0.95);

  const std::size_t H = horizons.size();
  LongHorizonConfig lp_config;
  lp_config.horizons = horizons;
  lp_config.ivx = config;
  lp_config.restrictions = Restrictions{Eigen::MatrixXd::Identity(k, k),
                                        Eigen::VectorXd::Zero(k)};

  std::vector<MultSummary> out;
  out.reserve(sizes.size() * H);
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    const int nT = sizes[c];
    SimulationSpec spec;
    spec.n = nT;
    spec.T = nT;
    spec.rho_star = rho_star;
    spec.beta_star = Eigen::VectorXd::Zero(k);
    spec.omega = Omega;
    spec.reps = reps;
    // distinct substream block per cell so cells are independent
    spec.seed = seed + 1 + static_cast<std::uint64_t>(c) * 0x100000000ULL;
    spec.validate();

    std::vector<double> err(static_cast<std::size_t>(reps) * H * k, 0.0);
    std::vector<unsigned char> reject(static_cast<std::size_t>(reps) * H, 0);
    std::vector<unsigned char> ok(static_cast<std::size_t>(reps), 0);

    parallel_for(reps, workers, [&](int r) {
      std::mt19937_64 rng = substream(spec.seed, static_cast<std::uint64_t>(r));
      const Panel panel = simulate_panel(spec, rng);
      try {
        const auto results = local_projection(panel, lp_config);
        for (std::size_t hidx = 0; hidx < H; ++hidx) {
          // beta^(h)* = R^{h-1} beta* = 0 under this DGP
          for (int j = 0; j < k; ++j)
            err[(static_cast<std::size_t>(r) * H + hidx) * k +
                static_cast<std::size_t>(j)] = results[hidx].beta_ivxj(j);
          reject[static_cast<std::size_t>(r) * H + hidx] =
              (*results[hidx].wald > crit) ? 1 : 0;
        }
        ok[static_cast<std::size_t>(r)] = 1;
      } catch (const NumericError&) {
      }
    });

    for (std::size_t hidx = 0; hidx < H; ++hidx) {
      MultSummary s;
      s.cell = "n=T=" + std::to_string(nT);
      s.horizon = horizons[hidx];
      Eigen::VectorXd mean_err = Eigen::VectorXd::Zero(k);
      double msq = 0.0;
      int m = 0, rej = 0, failures = 0;
      for (int r = 0; r < reps; ++r) {
        if (!ok[static_cast<std::size_t>(r)]) {
          ++failures;
          continue;
        }
        double sq = 0.0;
        for (int j = 0; j < k; ++j) {
          const double e = err[(static_cast<std::size_t>(r) * H + hidx) * k +
                               static_cast<std::size_t>(j)];
          mean_err(j) += e;
          sq += e * e;
        }
        msq += sq;
        rej += reject[static_cast<std::size_t>(r) * H + hidx];
        ++m;
      }
      if (m == 0)
        throw NumericError("run_mult_grid: all replications failed in " + s.cell);
      s.reps_used = m;
      s.failures = failures;
      mean_err /= static_cast<double>(m);
      s.norm_bias = mean_err.norm();
      s.msq_error = msq / m;
      s.rmse_norm = std::sqrt(s.msq_error);
      s.size = static_cast<double>(rej) / m;
      s.mc_se_size = std::sqrt(s.size * (1.0 - s.size) / m);
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace ivxj
