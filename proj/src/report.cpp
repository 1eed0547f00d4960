#include "ivxj/report.hpp"

#include <cctype>
#include <cmath>
#include <iomanip>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ivxj/kernels.hpp"

namespace ivxj {

namespace {

using nlohmann::json;

std::string fmt(double v, int prec = 10) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

std::string fmt_fixed(double v, int prec) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

json tagged(double value, const std::string& formula) {
  return json{{"value", value}, {"formula", formula}};
}

struct VariantTags {
  std::string beta_raw, bias, rho, se;
};

VariantTags tags_for(const Estimate& e) {
  VariantTags t;
  const bool ivx = e.base == Base::IVX;
  t.beta_raw = ivx ? "beta_IVX" : "beta_WG";
  const std::string b = ivx ? "b_IVX" : "b_WG";
  switch (e.rho_method) {
    case RhoMethod::NONE:
      t.rho = ivx ? "rho_XJ" : "rho_WG";
      t.bias = "0";
      break;
    case RhoMethod::WG:
      t.rho = "rho_WG";
      t.bias = "omega12_hat*" + b + "(rho_WG)";
      break;
    case RhoMethod::XD:
      t.rho = "rho_XD";
      t.bias = "omega12_hat*" + b + "(rho_XD)";
      break;
    case RhoMethod::XJ:
      t.rho = "rho_XJ";
      t.bias = "omega12_hat*" + b + "(rho_XJ)";
      break;
  }
  t.se = ivx ? "sigma_IVX" : "sigma_WG";
  return t;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

std::string stars(double t_stat) {
  const double a = std::abs(t_stat);
  if (a > 2.58) return "***";
  if (a > 1.96) return "**";
  if (a > 1.64) return "*";
  return "";
}

double pooled_sd(const Panel& panel, int regressor) {
  double sum = 0.0;
  std::size_t m = 0;
  for (const auto& ind : panel.individuals) {
    const auto& x = ind.x[static_cast<std::size_t>(regressor)];
    sum += kern::sum(x.data(), x.size());
    m += x.size();
  }
  if (m < 2) throw InputError("pooled_sd: need at least two observations");
  const double mean = sum / static_cast<double>(m);
  double ss = 0.0;
  for (const auto& ind : panel.individuals)
    for (double v : ind.x[static_cast<std::size_t>(regressor)])
      ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(m - 1));
}

nlohmann::json estimate_report(const std::vector<Estimate>& estimates,
                               const std::vector<std::string>& names,
                               const IvxConfig& config, double scale) {
  json rep;
  rep["schema_version"] = kReportSchemaVersion;
  rep["config"] = {{"c_z", config.c_z},
                   {"theta", config.theta},
                   {"ci_level", config.ci_level}};
  rep["scale"] = tagged(scale, scale == 1.0 ? "1" : "100*sd(x)");
  rep["estimates"] = json::array();
  for (std::size_t v = 0; v < estimates.size(); ++v) {
    const Estimate& e = estimates[v];
    const VariantTags t = tags_for(e);
    json je;
    je["estimator"] = names[v];
    je["beta"] = tagged(e.beta_hat * scale,
                        e.rho_method == RhoMethod::NONE
                            ? t.beta_raw
                            : t.beta_raw + " + " + t.bias);
    je["beta_raw"] = tagged(e.beta_raw * scale, t.beta_raw);
    je["bias_correction"] = tagged(e.bias_correction * scale, t.bias);
    je["rho"] = tagged(e.rho_hat, t.rho);
    je["se"] = tagged(e.se * scale, t.se);
    je["t"] = tagged(e.t_stat, "beta/" + t.se);
    je["ci"] = {{"lo", e.ci_lo * scale},
                {"hi", e.ci_hi * scale},
                {"formula", "beta -/+ z*" + t.se}};
    je["stars"] = stars(e.t_stat);
    je["omega"] = {{"omega11", tagged(e.cov.omega11, "omega11_hat")},
                   {"omega12", tagged(e.cov.omega12, "omega12_hat")},
                   {"omega22", tagged(e.cov.omega22, "omega22_hat")}};
    rep["estimates"].push_back(std::move(je));
  }
  return rep;
}

nlohmann::json lp_report(const std::vector<LongHorizonResult>& results,
                         const IvxConfig& config,
                         const std::vector<double>& scales) {
  json rep;
  rep["schema_version"] = kReportSchemaVersion;
  rep["config"] = {{"c_z", config.c_z},
                   {"theta", config.theta},
                   {"ci_level", config.ci_level}};
  rep["horizons"] = json::array();
  for (const auto& res : results) {
    json jh;
    jh["horizon"] = res.horizon;
    const int k = static_cast<int>(res.beta_ivxj.size());
    jh["coefficients"] = json::array();
    for (int j = 0; j < k; ++j) {
      const double sc = scales[static_cast<std::size_t>(j)];
      const double se = std::sqrt(std::max(res.theta_hat(j, j), 0.0));
      const double t = se > 0.0 ? res.beta_ivxj(j) / se : 0.0;
      json jc;
      jc["regressor"] = "x" + std::to_string(j + 1);
      jc["beta"] = tagged(res.beta_ivxj(j) * sc, "beta_IVX_h + b_h");
      jc["beta_raw"] = tagged(res.beta_ivx(j) * sc, "beta_IVX_h");
      jc["bias_correction"] = tagged(res.bias(j) * sc, "b_h = S_zx^-1 xi_h");
      jc["rho"] = tagged(res.r_xj(j), "rho_XJ");
      jc["se"] = tagged(se * sc, "sqrt(Theta_hat_jj)");
      jc["t"] = tagged(t, "beta/sqrt(Theta_hat_jj)");
      jc["stars"] = stars(t);
      jh["coefficients"].push_back(std::move(jc));
    }
    json gamma = json::array();
    for (double g : res.gamma_ee) gamma.push_back(g);
    jh["gamma_ee"] = {{"value", gamma}, {"formula", "Gamma_ee(0..h-1)"}};
    jh["omega11"] = tagged(res.omega11, "omega11_hat_IVX");
    if (res.wald) {
      jh["wald"] = tagged(*res.wald, "Wald_h");
      jh["wald_df"] = res.wald_df;
    }
    rep["horizons"].push_back(std::move(jh));
  }
  return rep;
}

std::string estimate_report_csv(const std::vector<Estimate>& estimates,
                                const std::vector<std::string>& names,
                                double scale) {
  std::ostringstream os;
  os << "estimator,beta,se,t,ci_lo,ci_hi,stars,rho,beta_raw,bias_correction,"
        "omega11,omega12,omega22\n";
  for (std::size_t v = 0; v < estimates.size(); ++v) {
    const Estimate& e = estimates[v];
    os << names[v] << ',' << fmt(e.beta_hat * scale) << ',' << fmt(e.se * scale)
       << ',' << fmt(e.t_stat) << ',' << fmt(e.ci_lo * scale) << ','
       << fmt(e.ci_hi * scale) << ',' << stars(e.t_stat) << ',' << fmt(e.rho_hat)
       << ',' << fmt(e.beta_raw * scale) << ',' << fmt(e.bias_correction * scale)
       << ',' << fmt(e.cov.omega11) << ',' << fmt(e.cov.omega12) << ','
       << fmt(e.cov.omega22) << "\n";
  }
  return os.str();
}

std::string lp_report_csv(const std::vector<LongHorizonResult>& results,
                          const std::vector<double>& scales) {
  std::ostringstream os;
  os << "horizon,regressor,beta,se,t,stars,beta_raw,bias_correction,rho,wald,"
        "wald_df\n";
  for (const auto& res : results) {
    const int k = static_cast<int>(res.beta_ivxj.size());
    for (int j = 0; j < k; ++j) {
      const double sc = scales[static_cast<std::size_t>(j)];
      const double se = std::sqrt(std::max(res.theta_hat(j, j), 0.0));
      const double t = se > 0.0 ? res.beta_ivxj(j) / se : 0.0;
      os << res.horizon << ",x" << (j + 1) << ',' << fmt(res.beta_ivxj(j) * sc)
         << ',' << fmt(se * sc) << ',' << fmt(t) << ',' << stars(t) << ','
         << fmt(res.beta_ivx(j) * sc) << ',' << fmt(res.bias(j) * sc) << ','
         << fmt(res.r_xj(j)) << ',';
      if (res.wald && j == 0)
        os << fmt(*res.wald) << ',' << res.wald_df;
      else
        os << ',';
      os << "\n";
    }
  }
  return os.str();
}

UnivariateTables replicate_univariate_tables(int reps, std::uint64_t seed,
                                             int workers, const IvxConfig& config,
                                             const std::vector<int>& sizes) {
  const std::vector<double> rhos = {0.60, 0.95, 0.99, 1.00, 1.01};
  const std::vector<double> omega12s = {0.70, 0.95};
  std::vector<SimulationSpec> specs;
  std::vector<std::string> labels;
  std::uint64_t cell = 0;
  for (double w : omega12s)
    for (double rho : rhos)
      for (int nT : sizes) {
        SimulationSpec s = SimulationSpec::univariate(nT, nT, rho, 0.0, w, reps,
                                                      seed + 1 + cell * 0x100000000ULL);
        specs.push_back(s);
        std::ostringstream lab;
        lab << fmt_fixed(w, 2) << ',' << fmt_fixed(rho, 2) << ',' << nT;
        labels.push_back(lab.str());
        ++cell;
      }

  std::vector<std::pair<Base, RhoMethod>> variants(kAllVariants.begin(),
                                                   kAllVariants.end());
  const auto rows = run_grid(specs, variants, reps, workers, config, labels);

  const std::string head = "omega12,rho,n";
  std::ostringstream bias, rmse, cov;
  bias << head << ",estimator,bias,mc_se\n";
  rmse << head << ",estimator,rmse,mc_se\n";
  cov << head << ",estimator,coverage,mc_se\n";
  for (const auto& r : rows) {
    bias << r.cell << ',' << r.estimator << ',' << fmt_fixed(r.bias, 4) << ','
         << fmt_fixed(r.mc_se_bias, 6) << "\n";
    rmse << r.cell << ',' << r.estimator << ',' << fmt_fixed(r.rmse, 4) << ','
         << fmt_fixed(r.mc_se_bias, 6) << "\n";
    cov << r.cell << ',' << r.estimator << ',' << fmt_fixed(r.coverage, 4) << ','
        << fmt_fixed(r.mc_se_cov, 6) << "\n";
  }
  return {bias.str(), rmse.str(), cov.str()};
}

std::string replicate_mult_table(int reps, std::uint64_t seed, int workers,
                                 const IvxConfig& config,
                                 const std::vector<int>& sizes) {
  const auto rows = run_mult_grid(sizes, {1, 2, 3, 4, 5}, reps, seed, workers, config);
  std::ostringstream os;
  os << "n,horizon,bias_norm,rmse,size_pct,mc_se_size_pct\n";
  for (const auto& r : rows) {
    os << r.cell.substr(4) << ',' << r.horizon << ',' << fmt_fixed(r.norm_bias, 4)
       << ',' << fmt_fixed(r.msq_error, 4) << ',' << fmt_fixed(100.0 * r.size, 2)
       << ',' << fmt_fixed(100.0 * r.mc_se_size, 3) << "\n";
  }
  return os.str();
}

SimulationSpec parse_simulation_spec(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("simulation config line " + std::to_string(lineno) +
                       ": expected key=value");
    auto strip = [](std::string s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.erase(s.begin());
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
      return s;
    };
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }

  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::string();
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto need = [&](const char* key) {
    const std::string v = take(key);
    if (v.empty()) throw InputError(std::string("simulation config: missing ") + key);
    return v;
  };

  SimulationSpec spec;
  spec.n = std::stoi(need("n"));
  spec.T = std::stoi(need("T"));
  const auto rhos = split_list(need("rho"));
  const int k = static_cast<int>(rhos.size());
  spec.rho_star.resize(k);
  for (int j = 0; j < k; ++j)
    spec.rho_star(j) = std::stod(rhos[static_cast<std::size_t>(j)]);
  spec.beta_star = Eigen::VectorXd::Zero(k);
  if (const std::string b = take("beta"); !b.empty()) {
    const auto parts = split_list(b);
    if (static_cast<int>(parts.size()) != k)
      throw InputError("simulation config: beta length must match rho length");
    for (int j = 0; j < k; ++j)
      spec.beta_star(j) = std::stod(parts[static_cast<std::size_t>(j)]);
  }
  spec.omega = Eigen::MatrixXd::Identity(k + 1, k + 1);
  if (const std::string om = take("omega"); !om.empty()) {
    const auto parts = split_list(om);
    if (static_cast<int>(parts.size()) != (k + 1) * (k + 1))
      throw InputError("simulation config: omega needs (k+1)^2 row-major entries");
    for (int r = 0; r < k + 1; ++r)
      for (int c = 0; c < k + 1; ++c)
        spec.omega(r, c) =
            std::stod(parts[static_cast<std::size_t>(r * (k + 1) + c)]);
  } else if (const std::string w = take("omega12"); !w.empty()) {
    if (k != 1) throw InputError("simulation config: omega12 shortcut requires k=1");
    spec.omega(0, 1) = spec.omega(1, 0) = std::stod(w);
  }
  if (const std::string v = take("alpha_sd"); !v.empty()) spec.alpha_sd = std::stod(v);
  if (const std::string v = take("delta0_sd"); !v.empty())
    spec.delta0_sd = std::stod(v);
  if (const std::string v = take("fe_time_average"); !v.empty())
    spec.fe_time_average = (v == "1" || v == "true");
  if (const std::string v = take("reps"); !v.empty()) spec.reps = std::stoi(v);
  if (const std::string v = take("seed"); !v.empty()) spec.seed = std::stoull(v);
  if (!kv.empty())
    throw InputError("simulation config: unknown key '" + kv.begin()->first + "'");
  spec.validate();
  return spec;
}

std::string format_simulation_spec(const SimulationSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "n = " << spec.n << "\nT = " << spec.T << "\nrho = ";
  for (int j = 0; j < spec.k(); ++j) os << (j ? "," : "") << spec.rho_star(j);
  os << "\nbeta = ";
  for (int j = 0; j < spec.k(); ++j) os << (j ? "," : "") << spec.beta_star(j);
  os << "\nomega = ";
  for (int r = 0; r < spec.k() + 1; ++r)
    for (int c = 0; c < spec.k() + 1; ++c)
      os << ((r + c) ? "," : "") << spec.omega(r, c);
  os << "\nalpha_sd = " << spec.alpha_sd << "\ndelta0_sd = " << spec.delta0_sd
     << "\nfe_time_average = " << (spec.fe_time_average ? 1 : 0)
     << "\nreps = " << spec.reps << "\nseed = " << spec.seed << "\n";
  return os.str();
}

}  // namespace ivxj
