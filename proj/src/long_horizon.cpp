#include "ivxj/long_horizon.hpp"

#include <Eigen/LU>
#include <cmath>

#include "ivxj/kernels.hpp"

namespace ivxj {

namespace {

thread_local std::vector<double> tl_a;

void demean_into(const double* a, int N, std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(N));
  const double m = kern::sum(a, N) / N;
  for (int t = 0; t < N; ++t) out[static_cast<std::size_t>(t)] = a[t] - m;
}

// sum_{m=1}^{M} (rho_z^m - rho^m) / (rho_z - rho), the geometric double sum
// shared by all bias numerators; literal loop near rho ~ rho_z.
double dsum2(double rho, double rho_z, int M) {
  if (M <= 0) return 0.0;
  if (std::abs(rho_z - rho) > 1e-8) {
    double total = 0.0, pz = rho_z, pr = rho;
    for (int m = 1; m <= M; ++m) {
      total += (pz - pr) / (rho_z - rho);
      pz *= rho_z;
      pr *= rho;
    }
    return total;
  }
  // literal expansion sum_{m=1}^{M} sum_{u=0}^{m-1} rho_z^{m-1-u} rho^u
  double total = 0.0;
  for (int m = 1; m <= M; ++m)
    for (int u = 0; u < m; ++u)
      total += std::pow(rho_z, m - 1 - u) * std::pow(rho, u);
  return total;
}

// Demeaned instrument matrix for one individual (k x N), plus raw z rows.
struct DesignAccum {
  Eigen::MatrixXd S_zx;      // sum z~ x'
  Eigen::VectorXd S_zy;      // sum z~ y_{t+h}
  Eigen::MatrixXd S_zz;      // sum_i (sum_t z z' - M_T)
};

Eigen::MatrixXd solve_design(const Eigen::MatrixXd& S_zx, const Eigen::MatrixXd& rhs) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(S_zx);
  if (!(lu.rcond() > 1e-12))
    throw NumericError("singular design (condition estimate > 1e12)");
  return lu.solve(rhs);
}

}  // namespace

Eigen::VectorXd r_xj(const Panel& panel) {
  const int k = panel.k();
  Eigen::VectorXd R(k);
  for (int j = 0; j < k; ++j) R(j) = xj_rho(panel, j).value;
  return R;
}

Eigen::VectorXd ivx_beta_h(const Panel& panel, const IvxInstrument& iv, int h) {
  const int k = panel.k();
  Eigen::MatrixXd S_zx = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd S_zy = Eigen::VectorXd::Zero(k);
  for (std::size_t i = 0; i < panel.individuals.size(); ++i) {
    const auto& ind = panel.individuals[i];
    const int N = ind.T() - h;
    for (int j = 0; j < k; ++j) {
      const auto& z = iv.z[i][static_cast<std::size_t>(j)];
      demean_into(z.data(), N, tl_a);
      for (int l = 0; l < k; ++l) {
        const auto& xl = ind.x[static_cast<std::size_t>(l)];
        S_zx(j, l) += kern::dot(tl_a.data(), xl.data() + 1, static_cast<std::size_t>(N));
      }
      S_zy(j) += kern::dot(tl_a.data(), ind.y.data() + 1 + h, static_cast<std::size_t>(N));
    }
  }
  return solve_design(S_zx, S_zy);
}

Eigen::VectorXd xi_h(const Eigen::VectorXd& R, const Eigen::VectorXd& omega12,
                     const Eigen::MatrixXd& Omega22, const Eigen::VectorXd& beta,
                     int h, int T, int n, double rho_z) {
  const int k = static_cast<int>(R.size());
  const int Th = T - h;
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(k);
  // first term: sum_{t=h+1}^{Th} sum_{s=h+1}^{t} rho_z^{t-s} R^{s-h-1} omega12
  for (int j = 0; j < k; ++j) xi(j) = omega12(j) * dsum2(R(j), rho_z, Th - h);
  // second term: sum_{tau=1}^{h-1} [geometric sums] Omega22 R^{h-1-tau} beta
  for (int tau = 1; tau <= h - 1; ++tau) {
    Eigen::VectorXd w(k);
    for (int j = 0; j < k; ++j) w(j) = std::pow(R(j), h - 1 - tau) * beta(j);
    const Eigen::VectorXd u = Omega22 * w;
    for (int j = 0; j < k; ++j) xi(j) += u(j) * dsum2(R(j), rho_z, Th - tau);
  }
  return (static_cast<double>(n) / static_cast<double>(Th)) * xi;
}

void omega_hats_mult(const Eigen::VectorXd& beta1, const Eigen::VectorXd& R,
                     const Panel& panel, double* omega11,
                     Eigen::VectorXd* omega12, Eigen::MatrixXd* Omega22) {
  const int k = panel.k();
  double s11 = 0.0;
  Eigen::VectorXd s12 = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd s22 = Eigen::MatrixXd::Zero(k, k);
  long long div = 0;

  std::vector<std::vector<double>> vres(static_cast<std::size_t>(k));
  std::vector<double> lagbuf, leadbuf, ybuf;
  for (const auto& ind : panel.individuals) {
    const int N = ind.T() - 1;
    // e~ residual from the h=1 regression
    demean_into(ind.y.data() + 2, N, ybuf);
    std::vector<double> eres = ybuf;
    for (int j = 0; j < k; ++j) {
      const auto& x = ind.x[static_cast<std::size_t>(j)];
      demean_into(x.data() + 1, N, lagbuf);
      demean_into(x.data() + 2, N, leadbuf);
      auto& vj = vres[static_cast<std::size_t>(j)];
      vj.resize(static_cast<std::size_t>(N));
      for (int t = 0; t < N; ++t) {
        vj[static_cast<std::size_t>(t)] =
            leadbuf[static_cast<std::size_t>(t)] - R(j) * lagbuf[static_cast<std::size_t>(t)];
        eres[static_cast<std::size_t>(t)] -= beta1(j) * lagbuf[static_cast<std::size_t>(t)];
      }
    }
    s11 += kern::dot_self(eres.data(), eres.size());
    for (int j = 0; j < k; ++j) {
      s12(j) += kern::dot(vres[static_cast<std::size_t>(j)].data(), eres.data(),
                          eres.size());
      for (int l = j; l < k; ++l)
        s22(j, l) += kern::dot(vres[static_cast<std::size_t>(j)].data(),
                               vres[static_cast<std::size_t>(l)].data(), eres.size());
    }
    div += ind.T() - 2;
  }
  for (int j = 0; j < k; ++j)
    for (int l = 0; l < j; ++l) s22(j, l) = s22(l, j);
  const double d = static_cast<double>(div);
  *omega11 = s11 / d;
  *omega12 = s12 / d;
  *Omega22 = s22 / d;
}

double gamma_ee_h(int ell, int h, const Eigen::VectorXd& beta1,
                  const Eigen::VectorXd& R, double omega11,
                  const Eigen::VectorXd& omega12, const Eigen::MatrixXd& Omega22) {
  if (ell >= h) return 0.0;
  const int k = static_cast<int>(R.size());
  // f(idx) = F_idx' [1; beta]: the e-selector for idx = 0, else R^{idx-1} beta
  auto f = [&](int idx) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(k + 1);
    if (idx == 0) {
      v(0) = 1.0;
    } else {
      for (int j = 0; j < k; ++j) v(j + 1) = std::pow(R(j), idx - 1) * beta1(j);
    }
    return v;
  };
  Eigen::MatrixXd Omega(k + 1, k + 1);
  Omega(0, 0) = omega11;
  Omega.block(0, 1, 1, k) = omega12.transpose();
  Omega.block(1, 0, k, 1) = omega12;
  Omega.block(1, 1, k, k) = Omega22;

  double total = 0.0;
  for (int tau = ell + 1; tau <= h; ++tau)
    total += f(h - tau).dot(Omega * f(h - tau + ell));
  return total;
}

double wald_h(const Eigen::MatrixXd& A, const Eigen::VectorXd& q,
              const Eigen::VectorXd& beta, const Eigen::MatrixXd& Theta) {
  const Eigen::VectorXd r = A * beta - q;
  const Eigen::MatrixXd M = A * Theta * A.transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  if (!(lu.rcond() > 1e-12))
    throw NumericError("singular restriction covariance");
  return r.dot(lu.solve(r));
}

std::vector<LongHorizonResult> local_projection(const Panel& panel,
                                                const LongHorizonConfig& config) {
  config.ivx.validate();
  if (config.horizons.empty())
    throw InputError("local_projection: need at least one horizon");
  const int k = panel.k();
  const double rho_z = config.ivx.rho_z(panel.T_eff());
  const double theta = config.ivx.theta;
  if (config.restrictions) {
    if (config.restrictions->A.cols() != k ||
        config.restrictions->A.rows() != config.restrictions->q.size() ||
        config.restrictions->A.rows() > k)
      throw InputError("restrictions: A must be m x k with m <= k, q length m");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(config.restrictions->A);
    if (lu.rank() < config.restrictions->A.rows())
      throw InputError("restrictions: A must have full row rank");
  }

  // Shared h = 1 ingredients
  const Eigen::VectorXd R = r_xj(panel);
  const IvxInstrument iv1 = ivx_instrument(panel, rho_z, 1);
  const Eigen::VectorXd beta1 = ivx_beta_h(panel, iv1, 1);
  double omega11 = 0.0;
  Eigen::VectorXd omega12;
  Eigen::MatrixXd Omega22;
  omega_hats_mult(beta1, R, panel, &omega11, &omega12, &Omega22);

  std::vector<LongHorizonResult> results;
  results.reserve(config.horizons.size());
  std::vector<double> zbuf;
  for (int h : config.horizons) {
    if (h < 1) throw InputError("local_projection: horizons must be >= 1");
    const IvxInstrument iv = (h == 1) ? iv1 : ivx_instrument(panel, rho_z, h);

    Eigen::MatrixXd S_zx = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd S_zy = Eigen::VectorXd::Zero(k);
    Eigen::MatrixXd S_zz = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd xi_total = Eigen::VectorXd::Zero(k);
    // The finite-sample correction M_T activates when the system contains a
    // nonstationary direction; it is the rank-one outer product in zbar so
    // that instrument cross products are centered consistently.  At k = 1
    // this is exactly the indicator rule of the univariate standard error.
    const bool nonstationary = (R.maxCoeff() >= 1.0);
    for (std::size_t i = 0; i < panel.individuals.size(); ++i) {
      const auto& ind = panel.individuals[i];
      const int N = ind.T() - h;
      if (N < 1)
        throw InputError("individual '" + ind.id + "': too short for horizon " +
                         std::to_string(h));
      Eigen::VectorXd zbar(k);
      for (int j = 0; j < k; ++j) {
        const auto& z = iv.z[i][static_cast<std::size_t>(j)];
        zbar(j) = kern::sum(z.data(), static_cast<std::size_t>(N)) / N;
        demean_into(z.data(), N, tl_a);
        for (int l = 0; l < k; ++l) {
          const auto& xl = ind.x[static_cast<std::size_t>(l)];
          S_zx(j, l) +=
              kern::dot(tl_a.data(), xl.data() + 1, static_cast<std::size_t>(N));
          const auto& zl = iv.z[i][static_cast<std::size_t>(l)];
          S_zz(j, l) += kern::dot(z.data(), zl.data(), static_cast<std::size_t>(N));
        }
        S_zy(j) +=
            kern::dot(tl_a.data(), ind.y.data() + 1 + h, static_cast<std::size_t>(N));
      }
      if (nonstationary)
        S_zz -= std::pow(static_cast<double>(N), theta) * std::pow(rho_z, h - 1) *
                (zbar * zbar.transpose());
      xi_total += xi_h(R, omega12, Omega22, beta1, h, ind.T(), 1, rho_z);
    }

    LongHorizonResult res;
    res.horizon = h;
    res.r_xj = R;
    res.omega11 = omega11;
    res.omega12 = omega12;
    res.Omega22 = Omega22;
    res.beta_ivx = solve_design(S_zx, S_zy);
    res.bias = solve_design(S_zx, xi_total);
    res.beta_ivxj = res.beta_ivx + res.bias;

    res.gamma_ee.resize(static_cast<std::size_t>(h));
    for (int ell = 0; ell < h; ++ell)
      res.gamma_ee[static_cast<std::size_t>(ell)] =
          gamma_ee_h(ell, h, beta1, R, omega11, omega12, Omega22);

    // Sigma = Pi(0) + sum_l [Pi(l) + Pi(l)'], Pi(l) = Gamma(l) * S_zz * R^l.
    // S_zz pools individuals without averaging so that the k = 1, h = 1 case
    // reduces exactly to the univariate standard error.
    Eigen::MatrixXd Sigma = Eigen::MatrixXd::Zero(k, k);
    for (int ell = 0; ell < h; ++ell) {
      Eigen::MatrixXd Pi = res.gamma_ee[static_cast<std::size_t>(ell)] * S_zz;
      for (int c = 0; c < k; ++c) Pi.col(c) *= std::pow(R(c), ell);
      Sigma += (ell == 0) ? Pi : Eigen::MatrixXd(Pi + Pi.transpose());
    }
    const Eigen::MatrixXd inv_left = solve_design(S_zx, Eigen::MatrixXd::Identity(k, k));
    res.theta_hat = inv_left * Sigma * inv_left.transpose();
    // symmetrize against roundoff
    res.theta_hat = 0.5 * (res.theta_hat + res.theta_hat.transpose()).eval();

    if (config.restrictions) {
      res.wald = wald_h(config.restrictions->A, config.restrictions->q,
                        res.beta_ivxj, res.theta_hat);
      res.wald_df = static_cast<int>(config.restrictions->A.rows());
    }
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace ivxj
