#pragma once
// Multivariate, multi-horizon IVXJ: panel local projection with bias
// correction, serial-correlation-aware covariance, and Wald tests.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ivxj/config.hpp"
#include "ivxj/estimators.hpp"
#include "ivxj/panel.hpp"

namespace ivxj {

struct Restrictions {
  Eigen::MatrixXd A;  // m x k, full row rank
  Eigen::VectorXd q;  // length m
};

struct LongHorizonConfig {
  std::vector<int> horizons;  // h = 1..H, nonempty
  IvxConfig ivx;
  std::optional<Restrictions> restrictions;
};

struct LongHorizonResult {
  int horizon = 1;
  Eigen::VectorXd beta_ivx;    // k
  Eigen::VectorXd beta_ivxj;   // k; beta_ivxj - beta_ivx = bias exactly
  Eigen::VectorXd bias;        // k
  Eigen::MatrixXd theta_hat;   // k x k, symmetric
  std::vector<double> gamma_ee;  // Gamma_ee(0..h-1)
  Eigen::VectorXd r_xj;        // diagonal of R_hat^XJ
  double omega11 = 0.0;        // residual variance at h = 1
  Eigen::VectorXd omega12;     // k, IVXJ innovation covariance
  Eigen::MatrixXd Omega22;     // k x k, XJ innovation covariance
  std::optional<double> wald;  // when restrictions given
  int wald_df = 0;
};

// Per-regressor XJ estimates assembled into the diagonal of R_hat.
Eigen::VectorXd r_xj(const Panel& panel);

// (sum z~ x')^{-1} sum z~ y_{t+h}; throws NumericError on an
// ill-conditioned design (condition estimate > 1e12).
Eigen::VectorXd ivx_beta_h(const Panel& panel, const IvxInstrument& iv, int h);

// Bias numerator xi^(h); R is the diagonal of the AR matrix.
Eigen::VectorXd xi_h(const Eigen::VectorXd& R, const Eigen::VectorXd& omega12,
                     const Eigen::MatrixXd& Omega22, const Eigen::VectorXd& beta,
                     int h, int T, int n, double rho_z);

// Innovation covariance estimates from the h=1 residuals.
void omega_hats_mult(const Eigen::VectorXd& beta1, const Eigen::VectorXd& R,
                     const Panel& panel, double* omega11,
                     Eigen::VectorXd* omega12, Eigen::MatrixXd* Omega22);

// Autocovariance of the h-step error built from the F-matrix embedding.
double gamma_ee_h(int ell, int h, const Eigen::VectorXd& beta1,
                  const Eigen::VectorXd& R, double omega11,
                  const Eigen::VectorXd& omega12, const Eigen::MatrixXd& Omega22);

// Wald statistic for H0: A beta = q against chi-square(m).
double wald_h(const Eigen::MatrixXd& A, const Eigen::VectorXd& q,
              const Eigen::VectorXd& beta, const Eigen::MatrixXd& Theta);

// Full multivariate pipeline over the requested horizons.
std::vector<LongHorizonResult> local_projection(const Panel& panel,
                                                const LongHorizonConfig& config);

}  // namespace ivxj
