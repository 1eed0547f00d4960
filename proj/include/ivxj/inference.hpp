#pragma once
// Bias formulas, covariance estimation, standard errors, and the end-to-end
// univariate procedure producing all eight estimator variants.

#include <array>
#include <string>

#include "ivxj/config.hpp"
#include "ivxj/estimators.hpp"
#include "ivxj/panel.hpp"

namespace ivxj {

struct CovarianceHat {
  double omega11 = 0.0;  // >= 0
  double omega12 = 0.0;
  double omega22 = 0.0;  // >= 0
};

enum class Base { WG, IVX };
enum class RhoMethod { NONE, WG, XD, XJ };

std::string variant_name(Base base, RhoMethod rho);  // "WG", "IVXJ", ...

struct Estimate {
  double beta_hat = 0.0;         // beta_raw + bias_correction (exact identity)
  double beta_raw = 0.0;
  double bias_correction = 0.0;  // omega12_hat * b(rho_hat); 0 when rho NONE
  double rho_hat = 0.0;
  RhoMethod rho_method = RhoMethod::NONE;
  Base base = Base::WG;
  double se = 0.0;
  double t_stat = 0.0;           // (beta_hat - hypothesized) / se, H0: beta = 0
  double ci_lo = 0.0, ci_hi = 0.0;
  CovarianceHat cov;
};

// Bias function of the WG slope: numerator double-sum evaluated per
// individual with its own T_i and divided by (T_i - 1), pooled over i.
double bias_wg(double rho, const Panel& panel, int regressor = 0);
// Bias function of the IVX slope: geometric closed form with a literal-loop
// fallback when |rho_z - rho| <= 1e-8.
double bias_ivx(double rho, double rho_z, const Panel& panel,
                const IvxInstrument& iv, int regressor = 0);

// Residual covariance estimates with divisor sum_i (T_i - 2).
CovarianceHat omega_hats(double beta, double rho, const Panel& panel,
                         int regressor = 0);

// Standard error of the IVX slope, including the finite-sample correction
// term activated when the plugged rho is >= 1.
double se_ivx(double omega11, double rho, double theta, const IvxInstrument& iv,
              const Panel& panel, int regressor = 0);

// lambda_T(rho): triple sum evaluated with O(T) prefix geometric sums.
double lambda_T(double rho, int T);

// Feasible WG standard error built from omega hats and lambda_T.
double se_wg_feasible(double omega11, double omega12, double rho,
                      const Panel& panel, int regressor = 0);

// Full procedure (Step 1 point estimates, Step 2 covariances, Step 3 bias
// correction, Step 4 confidence interval) for one variant.
Estimate estimate(const Panel& panel, const IvxConfig& config, Base base,
                  RhoMethod rho_method);

// All eight variants, sharing the per-panel intermediate computations.
// Order: WG, WG-WG, WG-XD, WG-XJ, IVX, IVX-WG, IVX-XD, IVXJ.
std::array<Estimate, 8> estimate_all(const Panel& panel, const IvxConfig& config);
extern const std::array<std::pair<Base, RhoMethod>, 8> kAllVariants;

}  // namespace ivxj
