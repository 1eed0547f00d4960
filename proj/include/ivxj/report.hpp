#pragma once
// Machine-readable reports: versioned JSON with a formula tag on every number,
// CSV renderings, significance stars, and the simulation-table generators.

#include <array>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "ivxj/inference.hpp"
#include "ivxj/long_horizon.hpp"
#include "ivxj/montecarlo.hpp"

namespace ivxj {

inline constexpr const char* kReportSchemaVersion = "1.0";

// "", "*", "**", "***" at the 1.64 / 1.96 / 2.58 thresholds.
std::string stars(double t_stat);

// Pooled sample standard deviation of regressor j over every stored value.
double pooled_sd(const Panel& panel, int regressor);

// Univariate estimate report. `scale` multiplies coefficients and standard
// errors (1.0 = raw; 100 * sd(x) under --standardize).
nlohmann::json estimate_report(const std::vector<Estimate>& estimates,
                               const std::vector<std::string>& names,
                               const IvxConfig& config, double scale);

// Multivariate / long-horizon report; scales has one entry per regressor.
nlohmann::json lp_report(const std::vector<LongHorizonResult>& results,
                         const IvxConfig& config,
                         const std::vector<double>& scales);

// Flat CSV renderings of the same content.
std::string estimate_report_csv(const std::vector<Estimate>& estimates,
                                const std::vector<std::string>& names,
                                double scale);
std::string lp_report_csv(const std::vector<LongHorizonResult>& results,
                          const std::vector<double>& scales);

// Deterministic CSV tables for the simulation study. The univariate grid is
// rho* x omega12 x (n = T); one table per statistic (bias, rmse, coverage),
// each with its Monte Carlo standard error column.
struct UnivariateTables {
  std::string bias_csv;      // "table_s1"
  std::string rmse_csv;      // "table_s2"
  std::string coverage_csv;  // "table_s3"
};
UnivariateTables replicate_univariate_tables(int reps, std::uint64_t seed,
                                             int workers, const IvxConfig& config,
                                             const std::vector<int>& sizes = {30, 50,
                                                                              100});

std::string replicate_mult_table(int reps, std::uint64_t seed, int workers,
                                 const IvxConfig& config,
                                 const std::vector<int>& sizes = {30, 50, 100});

// Key-value (de)serialization of a simulation spec; schema documented in the
// README. Unknown keys are an error.
SimulationSpec parse_simulation_spec(const std::string& text);
std::string format_simulation_spec(const SimulationSpec& spec);

}  // namespace ivxj
