// ivxj: bias-corrected estimation and inference for panel predictive
// regressions with persistent regressors.
//
// Subcommands:
//   estimate          univariate variants (or the multivariate h=1 pipeline)
//   lp                multivariate local projection over horizons
//   simulate          draw a synthetic panel from a key-value spec file
//   replicate-tables  regenerate the simulation-study tables
//
// Exit codes: 0 success, 2 input error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ivxj/csv.hpp"
#include "ivxj/report.hpp"

namespace {

constexpr int kExitInputError = 2;
constexpr int kExitNumericError = 3;

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ivxj::InputError("cannot open output file: " + out_path);
  out << content;
  if (!out) throw ivxj::InputError("failed writing output file: " + out_path);
}

std::vector<std::pair<ivxj::Base, ivxj::RhoMethod>> parse_estimators(
    const std::string& arg) {
  std::vector<std::pair<ivxj::Base, ivxj::RhoMethod>> out;
  std::stringstream ss(arg);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    bool found = false;
    for (const auto& v : ivxj::kAllVariants) {
      if (ivxj::variant_name(v.first, v.second) == name) {
        out.push_back(v);
        found = true;
        break;
      }
    }
    if (!found)
      throw ivxj::InputError(
          "unknown estimator '" + name +
          "' (expected WG, WG-WG, WG-XD, WG-XJ, IVX, IVX-WG, IVX-XD, IVXJ)");
  }
  if (out.empty()) throw ivxj::InputError("no estimators selected");
  return out;
}

ivxj::Restrictions parse_restrictions(const std::string& path, int k) {
  std::ifstream in(path);
  if (!in) throw ivxj::InputError("cannot open restrictions file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    if (vals.empty()) continue;
    if (static_cast<int>(vals.size()) != k + 1)
      throw ivxj::InputError(path + ":" + std::to_string(lineno) +
                             ": each restriction row needs k coefficients plus "
                             "the right-hand side (k = " +
                             std::to_string(k) + ")");
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw ivxj::InputError(path + ": no restriction rows");
  ivxj::Restrictions r;
  const int m = static_cast<int>(rows.size());
  r.A.resize(m, k);
  r.q.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < k; ++j)
      r.A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    r.q(i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
  return r;
}

std::vector<double> make_scales(const ivxj::Panel& panel, bool standardize) {
  std::vector<double> scales(static_cast<std::size_t>(panel.k()), 1.0);
  if (standardize)
    for (int j = 0; j < panel.k(); ++j)
      scales[static_cast<std::size_t>(j)] = 100.0 * ivxj::pooled_sd(panel, j);
  return scales;
}

struct CommonOpts {
  std::string input, out, format = "json", restrictions;
  double cz = -1.0, theta = 0.95, level = 0.95;
  bool standardize = false;
};

void add_ivx_opts(CLI::App* cmd, CommonOpts* o) {
  cmd->add_option("--cz", o->cz, "Instrument drift c_z (< 0)");
  cmd->add_option("--theta", o->theta, "Instrument persistence exponent in (0,1)");
  cmd->add_option("--level", o->level, "Two-sided confidence level in (0,1)");
}

void add_io_opts(CLI::App* cmd, CommonOpts* o) {
  cmd->add_option("--input", o->input, "Long-format panel CSV (id,time,y,x1[,...])")
      ->required();
  cmd->add_option("--out", o->out, "Output path ('-' or empty for stdout)");
  cmd->add_option("--format", o->format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--standardize", o->standardize,
                "Report coefficients and SEs times 100*sd(x)");
}

int run_estimate(const CommonOpts& o, const std::string& estimators_arg,
                 const std::string& restrictions_path) {
  ivxj::IvxConfig config{o.cz, o.theta, o.level};
  config.validate();
  const ivxj::Panel panel = ivxj::read_panel_csv(o.input);
  panel.validate(6);
  const auto scales = make_scales(panel, o.standardize);

  if (panel.k() > 1) {
    if (!estimators_arg.empty())
      throw ivxj::InputError(
          "--estimators applies to univariate panels; multivariate input runs "
          "the IVXJ pipeline");
    ivxj::LongHorizonConfig lp_config;
    lp_config.horizons = {1};
    lp_config.ivx = config;
    if (!restrictions_path.empty())
      lp_config.restrictions = parse_restrictions(restrictions_path, panel.k());
    const auto results = ivxj::local_projection(panel, lp_config);
    if (o.format == "csv")
      write_output(ivxj::lp_report_csv(results, scales), o.out);
    else
      write_output(ivxj::lp_report(results, config, scales).dump(2) + "\n", o.out);
    return 0;
  }

  if (!restrictions_path.empty())
    throw ivxj::InputError("--restrictions requires a multivariate panel or lp");
  const auto selection = estimators_arg.empty()
                             ? std::vector<std::pair<ivxj::Base, ivxj::RhoMethod>>(
                                   ivxj::kAllVariants.begin(),
                                   ivxj::kAllVariants.end())
                             : parse_estimators(estimators_arg);
  const auto all = ivxj::estimate_all(panel, config);
  std::vector<ivxj::Estimate> estimates;
  std::vector<std::string> names;
  for (const auto& sel : selection) {
    for (std::size_t a = 0; a < ivxj::kAllVariants.size(); ++a) {
      if (ivxj::kAllVariants[a] == sel) {
        estimates.push_back(all[a]);
        names.push_back(ivxj::variant_name(sel.first, sel.second));
      }
    }
  }
  if (o.format == "csv")
    write_output(ivxj::estimate_report_csv(estimates, names, scales[0]), o.out);
  else
    write_output(
        ivxj::estimate_report(estimates, names, config, scales[0]).dump(2) + "\n",
        o.out);
  return 0;
}

int run_lp(const CommonOpts& o, const std::vector<int>& horizons,
           const std::string& restrictions_path) {
  ivxj::IvxConfig config{o.cz, o.theta, o.level};
  config.validate();
  if (horizons.empty()) throw ivxj::InputError("lp requires --horizons");
  const ivxj::Panel panel = ivxj::read_panel_csv(o.input);
  panel.validate(6);
  ivxj::LongHorizonConfig lp_config;
  lp_config.horizons = horizons;
  lp_config.ivx = config;
  if (!restrictions_path.empty())
    lp_config.restrictions = parse_restrictions(restrictions_path, panel.k());
  const auto results = ivxj::local_projection(panel, lp_config);
  const auto scales = make_scales(panel, o.standardize);
  if (o.format == "csv")
    write_output(ivxj::lp_report_csv(results, scales), o.out);
  else
    write_output(ivxj::lp_report(results, config, scales).dump(2) + "\n", o.out);
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& out,
                 std::uint64_t rep) {
  std::ifstream in(config_path);
  if (!in) throw ivxj::InputError("cannot open simulation config: " + config_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const ivxj::SimulationSpec spec = ivxj::parse_simulation_spec(buf.str());
  std::mt19937_64 rng = ivxj::substream(spec.seed, rep);
  const ivxj::Panel panel = ivxj::simulate_panel(spec, rng);
  std::ostringstream csv;
  ivxj::write_panel_csv(panel, csv);
  write_output(csv.str(), out);
  return 0;
}

int run_replicate(int reps, std::uint64_t seed, int workers,
                  const std::string& out_dir, const std::string& which,
                  const CommonOpts& o) {
  ivxj::IvxConfig config{o.cz, o.theta, o.level};
  config.validate();
  std::filesystem::create_directories(out_dir);
  const auto path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  if (which == "univariate" || which == "all") {
    const auto tables =
        ivxj::replicate_univariate_tables(reps, seed, workers, config);
    write_output(tables.bias_csv, path("table_s1_bias.csv"));
    write_output(tables.rmse_csv, path("table_s2_rmse.csv"));
    write_output(tables.coverage_csv, path("table_s3_coverage.csv"));
  }
  if (which == "mult" || which == "all") {
    write_output(ivxj::replicate_mult_table(reps, seed, workers, config),
                 path("table_mult.csv"));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IVXJ: bias-corrected panel predictive regression"};
  app.require_subcommand(1);

  CommonOpts est_opts, lp_opts;
  std::string estimators_arg, est_restrictions, lp_restrictions;
  std::vector<int> horizons;

  CLI::App* est = app.add_subcommand("estimate", "One-step-ahead estimation");
  add_io_opts(est, &est_opts);
  add_ivx_opts(est, &est_opts);
  est->add_option("--estimators", estimators_arg,
                  "Comma-separated variant names (univariate panels)");
  est->add_option("--restrictions", est_restrictions,
                  "Restriction file for multivariate panels (rows: a1..ak q)");

  CLI::App* lp = app.add_subcommand("lp", "Local projection over horizons");
  add_io_opts(lp, &lp_opts);
  add_ivx_opts(lp, &lp_opts);
  lp->add_option("--horizons", horizons, "Horizons h >= 1")->required();
  lp->add_option("--restrictions", lp_restrictions,
                 "Restriction file (rows: a1..ak q)");

  std::string sim_config, sim_out;
  std::uint64_t sim_rep = 0;
  CLI::App* sim = app.add_subcommand("simulate", "Draw a synthetic panel");
  sim->add_option("--config", sim_config, "Key-value simulation spec file")
      ->required();
  sim->add_option("--out", sim_out, "Output CSV path ('-' for stdout)");
  sim->add_option("--rep", sim_rep, "Replication index (substream counter)");

  CommonOpts rep_opts;
  int reps = 5000, workers = static_cast<int>(std::thread::hardware_concurrency());
  std::uint64_t seed = 20260101;
  std::string out_dir = ".", which = "all";
  CLI::App* rep = app.add_subcommand("replicate-tables",
                                     "Regenerate the simulation-study tables");
  rep->add_option("--reps", reps, "Monte Carlo replications per cell");
  rep->add_option("--seed", seed, "Master seed");
  rep->add_option("--workers", workers, "Worker threads");
  rep->add_option("--out", out_dir, "Output directory")->required();
  rep->add_option("--tables", which, "Which tables: univariate, mult, all")
      ->check(CLI::IsMember({"univariate", "mult", "all"}));
  add_ivx_opts(rep, &rep_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed()) return run_estimate(est_opts, estimators_arg, est_restrictions);
    if (lp->parsed()) return run_lp(lp_opts, horizons, lp_restrictions);
    if (sim->parsed()) return run_simulate(sim_config, sim_out, sim_rep);
    if (rep->parsed())
      return run_replicate(reps, seed, workers, out_dir, which, rep_opts);
  } catch (const ivxj::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ivxj::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
