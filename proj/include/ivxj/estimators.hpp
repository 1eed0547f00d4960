#pragma once
// Univariate point estimators: WG and IVX for the slope, and WG / XD / XJ
// for the AR coefficient of the regressor.

#include "ivxj/panel.hpp"

namespace ivxj {

// Self-generated instrument z_{i,t} = sum_{s=1}^t rho_z^{t-s} (x_{i,s}-x_{i,s-1}),
// built per individual and regressor for t = 1..T_i - h.
struct IvxInstrument {
  // z[i][j] = instrument series for individual i, regressor j (length T_i - h)
  std::vector<std::vector<std::vector<double>>> z;
  double rho_z = 0.0;
  int horizon = 1;
};

enum class EstimatorTag { WG_BETA, IVX_BETA, WG_RHO, XD_RHO, XJ_RHO };

struct ScalarEstimate {
  double value = 0.0;
  EstimatorTag tag = EstimatorTag::WG_BETA;
};

IvxInstrument ivx_instrument(const Panel& panel, double rho_z, int horizon = 1);

// beta^WG = sum_i sum_{t=1}^{T-1} x~_{i,t} y_{i,t+1} / sum_i sum_t x~_{i,t}^2
ScalarEstimate wg_beta(const Panel& panel, int regressor = 0);
// beta^IVX = sum_i sum_t z~_{i,t} y_{i,t+1} / sum_i sum_t z~_{i,t} x_{i,t}
ScalarEstimate ivx_beta(const Panel& panel, const IvxInstrument& iv, int regressor = 0);
// rho^WG = sum_i sum_{t=1}^{T-1} x~_{i,t} x_{i,t+1} / sum_i sum_t x~_{i,t}^2
ScalarEstimate wg_rho(const Panel& panel, int regressor = 0);
// X-Differencing estimator of rho (Han-Phillips-Sul pairwise differences).
ScalarEstimate xd_rho(const Panel& panel, int regressor = 0);
// X-Jackknife estimator of rho (odd/even interlacing with initial-value
// adjustment); individuals with odd T drop their last observation here only.
ScalarEstimate xj_rho(const Panel& panel, int regressor = 0);

}  // namespace ivxj
