#include "ivxj/inference.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "ivxj/kernels.hpp"

namespace ivxj {

const std::array<std::pair<Base, RhoMethod>, 8> kAllVariants = {{
    {Base::WG, RhoMethod::NONE},
    {Base::WG, RhoMethod::WG},
    {Base::WG, RhoMethod::XD},
    {Base::WG, RhoMethod::XJ},
    {Base::IVX, RhoMethod::NONE},
    {Base::IVX, RhoMethod::WG},
    {Base::IVX, RhoMethod::XD},
    {Base::IVX, RhoMethod::XJ},
}};

std::string variant_name(Base base, RhoMethod rho) {
  const std::string b = (base == Base::WG) ? "WG" : "IVX";
  switch (rho) {
    case RhoMethod::NONE:
      return b;
    case RhoMethod::WG:
      return b + "-WG";
    case RhoMethod::XD:
      return b + "-XD";
    case RhoMethod::XJ:
      return (base == Base::IVX) ? "IVXJ" : "WG-XJ";
  }
  return b;
}

namespace {

thread_local std::vector<double> tl_a, tl_b, tl_c;

void demean_into(const double* a, int N, std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(N));
  const double m = kern::sum(a, N) / N;
  for (int t = 0; t < N; ++t) out[static_cast<std::size_t>(t)] = a[t] - m;
}

// dsum(N) = sum_{t=2}^{N} sum_{s=2}^{t} rho^{t-s} = sum_{t=2}^{N} G(t-1)
// with G(m) = 1 + rho + ... + rho^{m-1}.
double wg_bias_double_sum(double rho, int N) {
  double G = 0.0, pw = 1.0, total = 0.0;
  for (int m = 1; m <= N - 1; ++m) {
    G += pw;     // G(m)
    pw *= rho;
    total += G;  // t = m + 1
  }
  return total;
}

// dsum(N) = sum_{t=2}^{N} sum_{s=2}^{t} rho_z^{t-s} rho^{s-2}
//         = sum_{t=2}^{N} (rho_z^{t-1} - rho^{t-1}) / (rho_z - rho),
// with a literal double loop when rho_z and rho nearly coincide.
double ivx_bias_double_sum(double rho, double rho_z, int N) {
  if (std::abs(rho_z - rho) > 1e-8) {
    double total = 0.0, pz = rho_z, pr = rho;  // pz = rho_z^{t-1} at t = 2
    for (int t = 2; t <= N; ++t) {
      total += (pz - pr) / (rho_z - rho);
      pz *= rho_z;
      pr *= rho;
    }
    return total;
  }
  double total = 0.0;
  for (int t = 2; t <= N; ++t)
    for (int s = 2; s <= t; ++s)
      total += std::pow(rho_z, t - s) * std::pow(rho, s - 2);
  return total;
}

double pooled_xx(const Panel& panel, int regressor) {
  double den = 0.0;
  for (const auto& ind : panel.individuals) {
    const int N = ind.T() - 1;
    const auto& x = ind.x[static_cast<std::size_t>(regressor)];
    demean_into(x.data() + 1, N, tl_a);
    den += kern::dot_self(tl_a.data(), static_cast<std::size_t>(N));
  }
  return den;
}

double pooled_zx(const Panel& panel, const IvxInstrument& iv, int regressor) {
  double den = 0.0;
  for (std::size_t i = 0; i < panel.individuals.size(); ++i) {
    const auto& ind = panel.individuals[i];
    const int N = ind.T() - 1;
    const auto& z = iv.z[i][static_cast<std::size_t>(regressor)];
    const auto& x = ind.x[static_cast<std::size_t>(regressor)];
    demean_into(z.data(), N, tl_a);
    den += kern::dot(tl_a.data(), x.data() + 1, static_cast<std::size_t>(N));
  }
  return den;
}

}  // namespace

double bias_wg(double rho, const Panel& panel, int regressor) {
  if (!std::isfinite(rho)) throw NumericError("bias_wg: non-finite rho");
  double num = 0.0;
  for (const auto& ind : panel.individuals)
    num += wg_bias_double_sum(rho, ind.T() - 1) / (ind.T() - 1);
  const double den = pooled_xx(panel, regressor);
  if (den <= 0.0) throw NumericError("bias_wg: zero denominator");
  return num / den;
}

double bias_ivx(double rho, double rho_z, const Panel& panel,
                const IvxInstrument& iv, int regressor) {
  if (!std::isfinite(rho)) throw NumericError("bias_ivx: non-finite rho");
  double num = 0.0;
  for (const auto& ind : panel.individuals)
    num += ivx_bias_double_sum(rho, rho_z, ind.T() - 1) / (ind.T() - 1);
  const double den = pooled_zx(panel, iv, regressor);
  if (den == 0.0) throw NumericError("bias_ivx: zero denominator");
  return num / den;
}

CovarianceHat omega_hats(double beta, double rho, const Panel& panel,
                         int regressor) {
  double s11 = 0.0, s12 = 0.0, s22 = 0.0;
  long long div = 0;
  for (const auto& ind : panel.individuals) {
    const int N = ind.T() - 1;
    const auto& x = ind.x[static_cast<std::size_t>(regressor)];
    demean_into(x.data() + 1, N, tl_a);  // x~_{t},   t = 1..T-1
    demean_into(x.data() + 2, N, tl_b);  // x~_{t+1}, t+1 = 2..T
    demean_into(ind.y.data() + 2, N, tl_c);  // y~_{t+1}
    for (int t = 0; t < N; ++t) {
      const double e = tl_c[static_cast<std::size_t>(t)] -
                       beta * tl_a[static_cast<std::size_t>(t)];
      const double v = tl_b[static_cast<std::size_t>(t)] -
                       rho * tl_a[static_cast<std::size_t>(t)];
      s11 += e * e;
      s12 += e * v;
      s22 += v * v;
    }
    div += ind.T() - 2;
  }
  if (div <= 0) throw NumericError("omega_hats: panel too short");
  const double d = static_cast<double>(div);
  return {s11 / d, s12 / d, s22 / d};
}

double se_ivx(double omega11, double rho, double theta, const IvxInstrument& iv,
              const Panel& panel, int regressor) {
  if (omega11 < 0.0) throw NumericError("se_ivx: negative omega11");
  double rad = 0.0;
  for (std::size_t i = 0; i < panel.individuals.size(); ++i) {
    const auto& ind = panel.individuals[i];
    const int N = ind.T() - 1;
    const auto& z = iv.z[i][static_cast<std::size_t>(regressor)];
    const double ssz = kern::dot_self(z.data(), static_cast<std::size_t>(N));
    if (rho >= 1.0) {
      const double zbar = kern::sum(z.data(), static_cast<std::size_t>(N)) / N;
      rad += ssz - std::pow(static_cast<double>(N), theta) * zbar * zbar;
    } else {
      rad += ssz;
    }
  }
  if (rad < 0.0)
    throw NumericError("se_ivx: correction exceeds sum of squares (radicand " +
                       std::to_string(rad) + ")");
  const double den = pooled_zx(panel, iv, regressor);
  if (den == 0.0) throw NumericError("se_ivx: zero denominator");
  return std::sqrt(omega11) * std::sqrt(rad) / std::abs(den);
}

double lambda_T(double rho, int T) {
  if (T < 1) throw InputError("lambda_T: T must be positive");
  // G[m] = sum_{j=0}^{m-1} rho^j for m = 0..T
  std::vector<double> G(static_cast<std::size_t>(T) + 1, 0.0);
  double pw = 1.0;
  for (int m = 1; m <= T; ++m) {
    G[static_cast<std::size_t>(m)] = G[static_cast<std::size_t>(m - 1)] + pw;
    pw *= rho;
  }
  // P = running sum over s of G(T - s); inner bracket = (2/T) P_{t-1} - G(t-1)
  double P = 0.0, total = 0.0;
  const double invT = 1.0 / static_cast<double>(T);
  for (int t = 1; t <= T; ++t) {
    if (t >= 2) P += G[static_cast<std::size_t>(T - (t - 1))];
    const double inner = 2.0 * invT * P - G[static_cast<std::size_t>(t - 1)];
    total += invT * G[static_cast<std::size_t>(T - t)] * inner;
  }
  return total;
}

double se_wg_feasible(double omega11, double omega12, double rho,
                      const Panel& panel, int regressor) {
  double var_total = 0.0;
  double den = 0.0;
  for (const auto& ind : panel.individuals) {
    const int N = ind.T() - 1;  // number of regression terms
    const auto& x = ind.x[static_cast<std::size_t>(regressor)];
    demean_into(x.data() + 1, N, tl_a);
    const double ssx = kern::dot_self(tl_a.data(), static_cast<std::size_t>(N));
    den += ssx;
    const double dsum = wg_bias_double_sum(rho, N);
    const double bias_term = omega12 * dsum / static_cast<double>(N);
    var_total += omega11 * ssx + 2.0 * omega12 * omega12 * lambda_T(rho, N) -
                 bias_term * bias_term;
  }
  if (den <= 0.0) throw NumericError("se_wg_feasible: zero denominator");
  if (var_total < 0.0)
    throw NumericError("se_wg_feasible: variance estimate negative (" +
                       std::to_string(var_total) + ")");
  return std::sqrt(var_total) / den;
}

namespace {

struct Context {
  IvxInstrument iv;
  double rho_wg = 0.0, rho_xd = 0.0, rho_xj = 0.0;
  double beta_wg = 0.0, beta_ivx = 0.0;
  double rho_z = 0.0;
};

Context make_context(const Panel& panel, const IvxConfig& config) {
  Context ctx;
  ctx.rho_z = config.rho_z(panel.T_eff());
  ctx.iv = ivx_instrument(panel, ctx.rho_z, 1);
  ctx.rho_wg = wg_rho(panel).value;
  ctx.rho_xd = xd_rho(panel).value;
  ctx.rho_xj = xj_rho(panel).value;
  ctx.beta_wg = wg_beta(panel).value;
  ctx.beta_ivx = ivx_beta(panel, ctx.iv).value;
  return ctx;
}

Estimate assemble(const Panel& panel, const IvxConfig& config, const Context& ctx,
                  Base base, RhoMethod rho_method) {
  Estimate est;
  est.base = base;
  est.rho_method = rho_method;
  est.beta_raw = (base == Base::WG) ? ctx.beta_wg : ctx.beta_ivx;

  // rho used for covariances / SE; vanilla rows fall back to the SE
  // convention: WG pairs with rho^WG, IVX shares its SE with IVXJ (rho^XJ).
  double rho_hat = 0.0;
  switch (rho_method) {
    case RhoMethod::WG:
      rho_hat = ctx.rho_wg;
      break;
    case RhoMethod::XD:
      rho_hat = ctx.rho_xd;
      break;
    case RhoMethod::XJ:
      rho_hat = ctx.rho_xj;
      break;
    case RhoMethod::NONE:
      rho_hat = (base == Base::WG) ? ctx.rho_wg : ctx.rho_xj;
      break;
  }
  est.rho_hat = rho_hat;
  est.cov = omega_hats(est.beta_raw, rho_hat, panel);

  if (rho_method == RhoMethod::NONE) {
    est.bias_correction = 0.0;
  } else {
    const double b = (base == Base::WG)
                         ? bias_wg(rho_hat, panel)
                         : bias_ivx(rho_hat, ctx.rho_z, panel, ctx.iv);
    est.bias_correction = est.cov.omega12 * b;
  }
  est.beta_hat = est.beta_raw + est.bias_correction;

  est.se = (base == Base::WG)
               ? se_wg_feasible(est.cov.omega11, est.cov.omega12, rho_hat, panel)
               : se_ivx(est.cov.omega11, rho_hat, config.theta, ctx.iv, panel);

  const boost::math::normal_distribution<> norm(0.0, 1.0);
  const double q = boost::math::quantile(norm, 1.0 - (1.0 - config.ci_level) / 2.0);
  est.t_stat = (est.se > 0.0) ? est.beta_hat / est.se : 0.0;
  est.ci_lo = est.beta_hat - q * est.se;
  est.ci_hi = est.beta_hat + q * est.se;
  return est;
}

}  // namespace

Estimate estimate(const Panel& panel, const IvxConfig& config, Base base,
                  RhoMethod rho_method) {
  config.validate();
  const Context ctx = make_context(panel, config);
  return assemble(panel, config, ctx, base, rho_method);
}

std::array<Estimate, 8> estimate_all(const Panel& panel, const IvxConfig& config) {
  config.validate();
  const Context ctx = make_context(panel, config);
  std::array<Estimate, 8> out;
  for (std::size_t v = 0; v < kAllVariants.size(); ++v)
    out[v] = assemble(panel, config, ctx, kAllVariants[v].first,
                      kAllVariants[v].second);
  return out;
}

}  // namespace ivxj
