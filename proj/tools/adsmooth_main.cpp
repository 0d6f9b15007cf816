// adsmooth: panel estimators with similarity-weighted pooling.
//
// Subcommands:
//   simulate  one Monte Carlo cell on a synthetic DGP
//   table     a full preset experiment grid
//   fit       estimate a model from a long-format CSV panel
//   predict   score a CSV with a saved model bundle

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "adsmooth/ads.hpp"
#include "adsmooth/dgp.hpp"
#include "adsmooth/errors.hpp"
#include "adsmooth/io.hpp"
#include "adsmooth/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct AdsFlags {
  double delta = 0.5;
  std::string gamma = "median";
  int refine = 0;
  std::optional<double> lambda;
  double plugin_c = 1.1;
};

void add_ads_flags(CLI::App* cmd, AdsFlags& flags) {
  cmd->add_option("--delta", flags.delta, "similarity weight scale in (0,1]");
  cmd->add_option("--gamma", flags.gamma,
                  "kernel decay: a number, or 'median' for the median heuristic");
  cmd->add_option("--refine", flags.refine,
                  "weight refinement iterations (default 0 = one pass)");
  cmd->add_option("--lambda", flags.lambda,
                  "fixed Lasso penalty (default: plug-in rule)");
  cmd->add_option("--plugin-c", flags.plugin_c, "plug-in penalty constant");
}

ads::AdsConfig make_ads_config(const AdsFlags& flags) {
  ads::AdsConfig cfg;
  cfg.delta = flags.delta;
  if (flags.gamma == "median") {
    cfg.gamma_rule = ads::GammaRule::median_heuristic();
  } else {
    try {
      std::size_t used = 0;
      const double value = std::stod(flags.gamma, &used);
      if (used != flags.gamma.size()) throw std::invalid_argument(flags.gamma);
      cfg.gamma_rule = ads::GammaRule::fixed(value);
    } catch (const std::exception&) {
      throw ads::ValidationError("--gamma expects a number or 'median', got '" +
                                 flags.gamma + "'");
    }
  }
  cfg.refine_iterations = flags.refine;
  if (flags.lambda)
    cfg.lasso_cfg.penalty_rule = ads::PenaltyRule::fixed_lambda(*flags.lambda);
  cfg.lasso_cfg.plugin_constant = flags.plugin_c;
  return cfg;
}

std::vector<ads::Estimator> parse_estimator_list(const std::string& list) {
  std::vector<ads::Estimator> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string name = list.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!name.empty()) out.push_back(ads::parse_estimator(name));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ads::ValidationError("--estimators list is empty");
  return out;
}

void emit_report(const ads::MseReport& report, const std::string& out_path,
                 const std::string& format) {
  const ads::ReportFormat fmt = ads::parse_report_format(format);
  if (out_path.empty())
    std::cout << ads::render_report(report, fmt);
  else
    ads::write_report(report, out_path, fmt);
}

int cmd_simulate(const ads::DgpConfig& cell, bool cor_given, bool s_given,
                 const std::string& estimators, const AdsFlags& ads_flags,
                 int reps, std::uint64_t seed, int jobs,
                 const std::string& out_path, const std::string& format) {
  const bool sparse = cell.dgp == 3 || cell.dgp == 4;
  if (sparse && !s_given)
    throw ads::ValidationError("--s is required for dgp 3 and 4");
  if (!sparse && s_given)
    throw ads::ValidationError("--s only applies to dgp 3 and 4");
  if ((cell.dgp == 2 || cell.dgp == 3) && cor_given)
    throw ads::ValidationError("--cor only applies to dgp 1 and 4");

  const auto list = parse_estimator_list(estimators);
  const ads::AdsConfig ads_cfg = make_ads_config(ads_flags);
  const ads::CellResult result =
      ads::run_cell(cell, list, ads_cfg, reps, seed, jobs);
  if (result.failed) {
    std::cerr << "cell failed: " << result.failed_reps << "/" << reps
              << " repetitions errored\n";
    for (const auto& msg : result.rep_errors) std::cerr << "  " << msg << "\n";
    return kExitRuntime;
  }
  ads::MseReport report;
  report.rows = result.rows;
  emit_report(report, out_path, format);
  return kExitOk;
}

int cmd_table(const std::string& name, std::optional<int> reps,
              std::uint64_t seed, int jobs, const std::string& out_path,
              const std::string& format) {
  ads::SimConfig cfg = ads::paper_table(name);
  if (reps) cfg.reps = *reps;
  cfg.master_seed = seed;
  cfg.jobs = jobs;
  const auto log_cell = [](std::size_t index, std::size_t total,
                           const ads::DgpConfig& cell,
                           const ads::CellResult& result) {
    std::fprintf(stderr, "[%zu/%zu] %s%s\n", index + 1, total,
                 ads::cell_id(cell).c_str(), result.failed ? " FAILED" : "");
  };
  const ads::MseReport report = ads::run_suite(cfg, log_cell);
  emit_report(report, out_path, format);
  if (!report.failed_cells.empty()) {
    for (const auto& msg : report.failed_cells)
      std::cerr << "failed cell: " << msg << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_fit(const std::string& data_path, const std::string& y_col,
            const std::string& id_col, const std::string& time_col,
            const std::string& estimator, double test_fraction,
            const std::string& model_out, const AdsFlags& ads_flags,
            bool no_standardize) {
  const ads::Estimator est = ads::parse_estimator(estimator);
  ads::AdsConfig ads_cfg = make_ads_config(ads_flags);
  ads_cfg.lasso_cfg.standardize = !no_standardize;

  const ads::LongPanel panel =
      ads::read_long_csv(data_path, y_col, id_col, time_col);
  const auto [train, test] = ads::chronological_split(panel.data, test_fraction);

  double gamma = 0.0;
  Eigen::MatrixXd weights =
      Eigen::MatrixXd::Identity(train.n_individuals, train.n_individuals);
  ads::CoefficientSet coefs;
  if (est == ads::Estimator::ads_ols || est == ads::Estimator::ads_lasso) {
    ads_cfg.estimator = est == ads::Estimator::ads_ols ? ads::Backend::ols
                                                       : ads::Backend::lasso;
    const ads::AdsFit fit = ads::ads_fit(train, ads_cfg);
    coefs = fit.second_stage;
    weights = fit.weights.w;
    gamma = fit.gamma;
  } else {
    coefs = ads::fit_estimator(train, est, ads_cfg);
  }

  // Real data has no noiseless signal; MSE is against the observed response.
  const double train_mse =
      ads::mse_against(ads::predict(train, coefs), ads::evaluation_targets(train));
  const double test_mse =
      ads::mse_against(ads::predict(test, coefs), ads::evaluation_targets(test));
  std::printf("estimator %s\n", estimator.c_str());
  std::printf("individuals %d\ntrain_periods %d\ntest_periods %d\n",
              train.n_individuals, train.n_periods, test.n_periods);
  std::printf("train_mse %.6f\ntest_mse %.6f\n", train_mse, test_mse);

  if (!model_out.empty()) {
    ads::ModelBundle bundle;
    bundle.ids = panel.ids;
    bundle.coefs = coefs.coefs;
    bundle.weights = weights;
    bundle.meta["estimator"] = estimator;
    bundle.meta["y_column"] = y_col;
    bundle.meta["id_column"] = id_col;
    bundle.meta["time_column"] = time_col;
    std::string covs;
    for (const auto& c : panel.covariate_columns)
      covs += (covs.empty() ? "" : ";") + c;
    bundle.meta["covariates"] = covs;
    bundle.meta["delta"] = std::to_string(ads_cfg.delta);
    bundle.meta["gamma"] = std::to_string(gamma);
    bundle.meta["standardize"] = ads_cfg.lasso_cfg.standardize ? "1" : "0";
    ads::save_model_bundle(bundle, model_out);
  }
  return kExitOk;
}

int cmd_predict(const std::string& model_dir, const std::string& data_path,
                const std::string& out_path) {
  const ads::ModelBundle bundle = ads::load_model_bundle(model_dir);
  const auto need = [&](const std::string& key) {
    const auto it = bundle.meta.find(key);
    if (it == bundle.meta.end())
      throw ads::SchemaError("model bundle meta.csv lacks key '" + key + "'");
    return it->second;
  };
  std::vector<std::string> covariates;
  {
    const std::string covs = need("covariates");
    std::size_t start = 0;
    while (start <= covs.size()) {
      const std::size_t semi = covs.find(';', start);
      covariates.push_back(covs.substr(
          start, semi == std::string::npos ? std::string::npos : semi - start));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
  }
  const ads::LongRows rows = ads::read_long_rows(data_path, need("id_column"),
                                                 need("time_column"), covariates);
  if (rows.design.cols() != bundle.coefs.cols())
    throw ads::DimensionError("data covariates do not match the model");

  std::unordered_map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < bundle.ids.size(); ++i)
    index[bundle.ids[i]] = static_cast<Eigen::Index>(i);

  std::string out = "id,time,prediction\n";
  char buf[64];
  for (Eigen::Index r = 0; r < rows.design.rows(); ++r) {
    const auto it = index.find(rows.id[static_cast<std::size_t>(r)]);
    if (it == index.end())
      throw ads::ValidationError("row " + std::to_string(r + 2) +
                                 ": unknown individual id '" +
                                 rows.id[static_cast<std::size_t>(r)] + "'");
    const double value = rows.design.row(r).dot(bundle.coefs.row(it->second));
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    out += rows.id[static_cast<std::size_t>(r)] + "," +
           std::to_string(rows.time[static_cast<std::size_t>(r)]) + "," + buf +
           "\n";
  }
  std::ofstream f(out_path);
  if (!f) throw ads::IoError("cannot write '" + out_path + "'");
  f << out;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"similarity-weighted panel estimators"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run one Monte Carlo cell");
  ads::DgpConfig cell;
  std::string design_str = "iid";
  std::string estimators;
  AdsFlags sim_ads;
  int reps = 100;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out_path;
  std::string format = "csv";
  simulate->add_option("--dgp", cell.dgp, "data generating process")
      ->required()
      ->check(CLI::Range(1, 4));
  simulate->add_option("--n", cell.n, "individuals")->required();
  simulate->add_option("--t", cell.t, "periods per individual")->required();
  simulate->add_option("--p", cell.p, "covariates")->required();
  auto* s_opt = simulate->add_option("--s", cell.s, "nonzero covariates (dgp 3/4)");
  auto* cor_opt =
      simulate->add_option("--cor", cell.beta_cor, "coefficient correlation (dgp 1/4)");
  simulate->add_option("--design", design_str, "covariate design")
      ->check(CLI::IsMember({"iid", "toeplitz"}));
  simulate->add_option("--sd", cell.noise_sd, "noise standard deviation");
  simulate->add_option("--reps", reps, "Monte Carlo repetitions");
  simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--estimators", estimators,
                       "comma-separated: naive,ols,lasso,ads-ols,ads-lasso")
      ->required();
  simulate->add_option("--jobs", jobs, "worker threads");
  simulate->add_option("--out", out_path, "report path (default: stdout)");
  simulate->add_option("--format", format)->check(CLI::IsMember({"csv", "markdown"}));
  add_ads_flags(simulate, sim_ads);

  // table
  auto* table = app.add_subcommand("table", "run a preset experiment grid");
  std::string table_name;
  std::optional<int> table_reps;
  std::uint64_t table_seed = 0;
  int table_jobs = 1;
  std::string table_out;
  std::string table_format = "csv";
  table->add_option("--name", table_name,
                    "linear-s1-iid|linear-s1-cor|linear-s2|lasso-s1|lasso-s2")
      ->required();
  table->add_option("--reps", table_reps, "override repetitions (default 500)");
  table->add_option("--seed", table_seed, "master seed");
  table->add_option("--jobs", table_jobs, "worker threads");
  table->add_option("--out", table_out, "report path")->required();
  table->add_option("--format", table_format)
      ->check(CLI::IsMember({"csv", "markdown"}));

  // fit
  auto* fit = app.add_subcommand("fit", "fit a panel model from CSV");
  std::string data_path, y_col, id_col, time_col, estimator, model_out;
  double test_fraction = 0.2;
  bool no_standardize = false;
  AdsFlags fit_ads;
  fit->add_option("--data", data_path, "long-format CSV")->required();
  fit->add_option("--y", y_col, "response column")->required();
  fit->add_option("--id", id_col, "individual id column")->required();
  fit->add_option("--time", time_col, "time index column")->required();
  fit->add_option("--estimator", estimator)
      ->required()
      ->check(CLI::IsMember({"naive", "ols", "lasso", "ads-ols", "ads-lasso"}));
  fit->add_option("--test-fraction", test_fraction,
                  "held-out fraction of each individual's periods");
  fit->add_option("--model-out", model_out, "directory for the model bundle");
  fit->add_flag("--no-standardize", no_standardize,
                "skip covariate standardization in Lasso fits");
  add_ads_flags(fit, fit_ads);

  // predict
  auto* predict = app.add_subcommand("predict", "score a CSV with a saved model");
  std::string model_dir, predict_data, predict_out;
  predict->add_option("--model", model_dir, "model bundle directory")->required();
  predict->add_option("--data", predict_data, "long-format CSV")->required();
  predict->add_option("--out", predict_out, "prediction CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      cell.design = ads::parse_design(design_str);
      try {
        return cmd_simulate(cell, cor_opt->count() > 0, s_opt->count() > 0,
                            estimators, sim_ads, reps, seed, jobs, out_path,
                            format);
      } catch (const ads::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;  // bad flag combination
      }
    }
    if (table->parsed()) {
      try {
        ads::paper_table(table_name);
      } catch (const ads::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
      }
      return cmd_table(table_name, table_reps, table_seed, table_jobs,
                       table_out, table_format);
    }
    if (fit->parsed())
      return cmd_fit(data_path, y_col, id_col, time_col, estimator,
                     test_fraction, model_out, fit_ads, no_standardize);
    if (predict->parsed())
      return cmd_predict(model_dir, predict_data, predict_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
