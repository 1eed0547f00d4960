#include "ivxj/estimators.hpp"

#include <cmath>

#include "ivxj/kernels.hpp"

namespace ivxj {

namespace {

// Demeaned copy of a[0..N) into out.
void demean_into(const double* a, int N, std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(N));
  const double m = kern::sum(a, N) / N;
  for (int t = 0; t < N; ++t) out[static_cast<std::size_t>(t)] = a[t] - m;
}

thread_local std::vector<double> tl_buf;

}  // namespace

IvxInstrument ivx_instrument(const Panel& panel, double rho_z, int horizon) {
  if (!(rho_z > 0.0 && rho_z < 1.0))
    throw InputError("ivx_instrument: rho_z must lie in (0,1)");
  if (horizon < 1) throw InputError("ivx_instrument: horizon must be >= 1");
  IvxInstrument iv;
  iv.rho_z = rho_z;
  iv.horizon = horizon;
  iv.z.resize(panel.individuals.size());
  const int k = panel.k();
  for (std::size_t i = 0; i < panel.individuals.size(); ++i) {
    const auto& ind = panel.individuals[i];
    const int N = ind.T() - horizon;  // instrument length
    if (N < 1)
      throw InputError("individual '" + ind.id + "': too short for horizon " +
                       std::to_string(horizon));
    iv.z[i].resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      const auto& x = ind.x[static_cast<std::size_t>(j)];
      auto& z = iv.z[i][static_cast<std::size_t>(j)];
      z.resize(static_cast<std::size_t>(N));
      double prev = 0.0;
      for (int t = 1; t <= N; ++t) {
        prev = rho_z * prev + (x[static_cast<std::size_t>(t)] -
                               x[static_cast<std::size_t>(t - 1)]);
        z[static_cast<std::size_t>(t - 1)] = prev;
      }
    }
  }
  return iv;
}

ScalarEstimate wg_beta(const Panel& panel, int regressor) {
  double num = 0.0, den = 0.0;
  for (const auto& ind : panel.individuals) {
    const int N = ind.T() - 1;
    const auto& x = ind.x[static_cast<std::size_t>(regressor)];
    demean_into(x.data() + 1, N, tl_buf);
    num += kern::dot(tl_buf.data(), ind.y.data() + 2, static_cast<std::size_t>(N));
    den += kern::dot_self(tl_buf.data(), static_cast<std::size_t>(N));
  }
  if (den <= 0.0) throw NumericError("wg_beta: degenerate regressor");
  return {num / den, EstimatorTag::WG_BETA};
}

ScalarEstimate ivx_beta(const Panel& panel, const IvxInstrument& iv, int regressor) {
  if (iv.horizon != 1) throw InputError("ivx_beta: instrument must have horizon 1");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < panel.individuals.size(); ++i) {
    const auto& ind = panel.individuals[i];
    const int N = ind.T() - 1;
    const auto& z = iv.z[i][static_cast<std::size_t>(regressor)];
    const auto& x = ind.x[static_cast<std::size_t>(regressor)];
    demean_into(z.data(), N, tl_buf);
    num += kern::dot(tl_buf.data(), ind.y.data() + 2, static_cast<std::size_t>(N));
    den += kern::dot(tl_buf.data(), x.data() + 1, static_cast<std::size_t>(N));
  }
  if (den == 0.0) throw NumericError("ivx_beta: singular design");
  return {num / den, EstimatorTag::IVX_BETA};
}

ScalarEstimate wg_rho(const Panel& panel, int regressor) {
  double num = 0.0, den = 0.0;
  for (const auto& ind : panel.individuals) {
    const int N = ind.T() - 1;
    const auto& x = ind.x[static_cast<std::size_t>(regressor)];
    demean_into(x.data() + 1, N, tl_buf);
    num += kern::dot(tl_buf.data(), x.data() + 2, static_cast<std::size_t>(N));
    den += kern::dot_self(tl_buf.data(), static_cast<std::size_t>(N));
  }
  if (den <= 0.0) throw NumericError("wg_rho: degenerate regressor");
  return {num / den, EstimatorTag::WG_RHO};
}

ScalarEstimate xd_rho(const Panel& panel, int regressor) {
  double num = 0.0, den = 0.0;
  for (const auto& ind : panel.individuals) {
    const int T = ind.T();
    if (T < 4)
      throw InputError("individual '" + ind.id + "': too short for XD (T >= 4)");
    const auto& x = ind.x[static_cast<std::size_t>(regressor)];
    // Running prefix sums over s = 1..t-3 of x_s, x_{s+1}, x_{s+1}x_s, x_{s+1}^2.
    double S1 = 0.0, S2 = 0.0, S11 = 0.0, S22 = 0.0;
    for (int t = 4; t <= T; ++t) {
      const int s = t - 3;  // newly admitted pair index
      const double xs = x[static_cast<std::size_t>(s)];
      const double xs1 = x[static_cast<std::size_t>(s + 1)];
      S1 += xs;
      S2 += xs1;
      S11 += xs1 * xs;
      S22 += xs1 * xs1;
      const double m = static_cast<double>(t - 3);
      const double xa = x[static_cast<std::size_t>(t - 1)];
      const double xb = x[static_cast<std::size_t>(t)];
      num += m * xa * xb - xa * S1 - xb * S2 + S11;
      den += m * xa * xa - 2.0 * xa * S2 + S22;
    }
  }
  if (den <= 0.0) throw NumericError("xd_rho: all X-differences are zero");
  return {num / den, EstimatorTag::XD_RHO};
}

ScalarEstimate xj_rho(const Panel& panel, int regressor) {
  double num = 0.0, den = 0.0;
  for (const auto& ind : panel.individuals) {
    int T = ind.T();
    if (T % 2 != 0) --T;  // odd-T rule: drop the last observation here only
    if (T < 6)
      throw InputError("individual '" + ind.id + "': series too short for XJ");
    const auto& x = ind.x[static_cast<std::size_t>(regressor)];
    const double half = static_cast<double>(T - 2) / 2.0;

    double sumO = 0.0, sumE = 0.0, sumO_lag2 = 0.0;
    for (int t = 3; t <= T - 1; t += 2) {
      sumO += x[static_cast<std::size_t>(t)];
      sumO_lag2 += x[static_cast<std::size_t>(t - 2)];
    }
    for (int t = 2; t <= T - 2; t += 2) sumE += x[static_cast<std::size_t>(t)];
    const double meanO = sumO / half;
    const double meanE = sumE / half;

    double cross = 0.0;
    for (int t = 3; t <= T - 1; t += 2) {
      const double xt = x[static_cast<std::size_t>(t)] - meanO;
      cross += xt * x[static_cast<std::size_t>(t + 1)];
      den += xt * xt;
    }
    for (int t = 2; t <= T - 2; t += 2) {
      const double xt = x[static_cast<std::size_t>(t)] - meanE;
      cross += xt * x[static_cast<std::size_t>(t + 1)];
      den += xt * xt;
    }
    double compressed = 0.0;
    for (int t = 1; t <= (T - 2) / 2; ++t)
      compressed += x[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(t + 1)];
    const double eta = (x[1] * sumE + x[2] * sumO_lag2) / half;
    num += cross + 2.0 * compressed / half - eta;
  }
  if (den <= 0.0) throw NumericError("xj_rho: degenerate regressor");
  return {num / den, EstimatorTag::XJ_RHO};
}

}  // namespace ivxj
