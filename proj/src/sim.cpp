#include "adsmooth/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>

#include "adsmooth/errors.hpp"

namespace ads {

namespace {

bool uses_cor(const DgpConfig& cell) { return cell.dgp == 1 || cell.dgp == 4; }

void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int k = 0; k < jobs; ++k)
    workers.emplace_back([&, k] {
      for (int i = k; i < count; i += jobs) body(i);
    });
  for (auto& w : workers) w.join();
}

}  // namespace

std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::naive: return "naive";
    case Estimator::ols: return "ols";
    case Estimator::lasso: return "lasso";
    case Estimator::ads_ols: return "ads-ols";
    case Estimator::ads_lasso: return "ads-lasso";
  }
  throw ValidationError("unknown estimator");
}

Estimator parse_estimator(const std::string& name) {
  if (name == "naive") return Estimator::naive;
  if (name == "ols") return Estimator::ols;
  if (name == "lasso") return Estimator::lasso;
  if (name == "ads-ols") return Estimator::ads_ols;
  if (name == "ads-lasso") return Estimator::ads_lasso;
  throw ValidationError("unknown estimator '" + name + "'");
}

void SimConfig::validate() const {
  if (reps < 1) throw ValidationError("reps must be at least 1");
  if (estimators.empty()) throw ValidationError("estimator set is empty");
  if (jobs < 1) throw ValidationError("jobs must be at least 1");
  ads.validate();
  for (const auto& cell : cells) cell.validate();
}

std::string cell_id(const DgpConfig& cell) {
  char cor[32] = "-";
  if (uses_cor(cell)) std::snprintf(cor, sizeof(cor), "%.17g", cell.beta_cor);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "dgp=%d;design=%s;n=%d;t=%d;p=%d;s=%d;cor=%s;sd=%.17g",
                cell.dgp, design_name(cell.design).c_str(), cell.n, cell.t,
                cell.p, cell.dgp == 3 || cell.dgp == 4 ? cell.s : 0, cor,
                cell.noise_sd);
  return buf;
}

CoefficientSet fit_estimator(const PanelDataset& train, Estimator estimator,
                             const AdsConfig& ads) {
  switch (estimator) {
    case Estimator::naive:
      return naive_fit(train);
    case Estimator::ols:
    case Estimator::lasso: {
      const Backend backend =
          estimator == Estimator::ols ? Backend::ols : Backend::lasso;
      CoefficientSet out;
      out.coefs.resize(train.n_individuals, train.n_covariates + 1);
      for (int i = 0; i < train.n_individuals; ++i)
        out.coefs.row(i) = fit_individual(train, i, backend, ads.lasso_cfg);
      return out;
    }
    case Estimator::ads_ols:
    case Estimator::ads_lasso: {
      AdsConfig cfg = ads;
      cfg.estimator =
          estimator == Estimator::ads_ols ? Backend::ols : Backend::lasso;
      return ads_fit(train, cfg).second_stage;
    }
  }
  throw ValidationError("unknown estimator");
}

CellResult run_cell(const DgpConfig& cell, const std::vector<Estimator>& estimators,
                    const AdsConfig& ads, int reps, std::uint64_t master_seed,
                    int jobs) {
  cell.validate();
  ads.validate();
  if (reps < 1) throw ValidationError("reps must be at least 1");
  if (estimators.empty()) throw ValidationError("estimator set is empty");

  const std::string id = cell_id(cell);
  const std::size_t n_est = estimators.size();
  // mses[r] holds one out-of-sample MSE per estimator, or stays empty on failure.
  std::vector<std::vector<double>> mses(static_cast<std::size_t>(reps));
  std::vector<std::string> errors(static_cast<std::size_t>(reps));

  parallel_for(reps, jobs, [&](int r) {
    DgpConfig draw = cell;
    draw.seed = derive_stream(master_seed, id, static_cast<std::uint64_t>(r));
    try {
      const GeneratedPanel panel = gen_panel(draw);
      const auto& targets = evaluation_targets(panel.test);
      std::vector<double> row(n_est);
      for (std::size_t e = 0; e < n_est; ++e) {
        const CoefficientSet coefs =
            fit_estimator(panel.train, estimators[e], ads);
        row[e] = mse_against(predict(panel.test, coefs), targets);
      }
      mses[static_cast<std::size_t>(r)] = std::move(row);
    } catch (const std::exception& ex) {
      errors[static_cast<std::size_t>(r)] = ex.what();
    }
  });

  CellResult result;
  std::set<std::string> distinct;
  for (int r = 0; r < reps; ++r)
    if (mses[static_cast<std::size_t>(r)].empty()) {
      ++result.failed_reps;
      distinct.insert(errors[static_cast<std::size_t>(r)]);
    }
  for (const auto& msg : distinct) {
    if (result.rep_errors.size() >= 5) break;
    result.rep_errors.push_back(msg);
  }
  if (result.failed_reps > 0.01 * reps) {
    result.failed = true;
    return result;
  }

  const int used = reps - result.failed_reps;
  for (std::size_t e = 0; e < n_est; ++e) {
    double mean = 0.0;
    for (int r = 0; r < reps; ++r)
      if (!mses[static_cast<std::size_t>(r)].empty())
        mean += mses[static_cast<std::size_t>(r)][e];
    mean /= used;
    double var = 0.0;
    for (int r = 0; r < reps; ++r)
      if (!mses[static_cast<std::size_t>(r)].empty()) {
        const double d = mses[static_cast<std::size_t>(r)][e] - mean;
        var += d * d;
      }
    const double stderr_mc =
        used > 1 ? std::sqrt(var / (used - 1)) / std::sqrt(double(used)) : 0.0;

    MseRow row;
    row.dgp = cell.dgp;
    row.design = design_name(cell.design);
    row.n = cell.n;
    row.t = cell.t;
    if (uses_cor(cell)) row.cor = cell.beta_cor;
    row.estimator = estimator_name(estimators[e]);
    row.mse = mean;
    row.mc_stderr = stderr_mc;
    row.reps = used;
    result.rows.push_back(std::move(row));
  }
  return result;
}

MseReport run_suite(const SimConfig& cfg, const CellObserver& observer) {
  cfg.validate();
  MseReport report;
  for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
    const CellResult result = run_cell(cfg.cells[c], cfg.estimators, cfg.ads,
                                       cfg.reps, cfg.master_seed, cfg.jobs);
    if (result.failed) {
      std::string msg = cell_id(cfg.cells[c]) + ": " +
                        std::to_string(result.failed_reps) + "/" +
                        std::to_string(cfg.reps) + " repetitions failed";
      for (const auto& err : result.rep_errors) msg += "; " + err;
      report.failed_cells.push_back(std::move(msg));
    } else {
      report.rows.insert(report.rows.end(), result.rows.begin(),
                         result.rows.end());
    }
    if (observer) observer(c, cfg.cells.size(), cfg.cells[c], result);
  }
  return report;
}

SimConfig paper_table(const std::string& name) {
  SimConfig cfg;
  cfg.reps = 500;

  const auto add = [&cfg](int dgp, Design design, int n, int t, int p, int s,
                          double cor) {
    DgpConfig cell;
    cell.dgp = dgp;
    cell.design = design;
    cell.n = n;
    cell.t = t;
    cell.p = p;
    cell.s = s;
    cell.beta_cor = cor;
    cfg.cells.push_back(cell);
  };

  if (name == "linear-s1-iid") {
    cfg.estimators = {Estimator::ols, Estimator::ads_ols};
    const double cors[] = {0.0, 0.3, 0.7, 1.0};
    const std::pair<int, int> p5[] = {{2, 10}, {10, 10}, {50, 10}, {2, 20}, {10, 20}};
    const std::pair<int, int> p10[] = {{2, 20}, {10, 20}, {50, 20}, {2, 50}, {10, 50}};
    for (auto [n, t] : p5)
      for (double cor : cors) add(1, Design::iid, n, t, 5, 0, cor);
    for (auto [n, t] : p10)
      for (double cor : cors) add(1, Design::iid, n, t, 10, 0, cor);
  } else if (name == "linear-s1-cor") {
    cfg.estimators = {Estimator::ols, Estimator::ads_ols};
    const double cors[] = {0.0, 0.3, 0.5, 0.8, 1.0};
    const std::pair<int, int> cells[] = {{2, 10}, {10, 10}, {50, 10}, {100, 10}, {2, 20}};
    for (auto [n, t] : cells)
      for (double cor : cors) add(1, Design::toeplitz, n, t, 5, 0, cor);
  } else if (name == "linear-s2") {
    cfg.estimators = {Estimator::ols, Estimator::ads_ols};
    std::vector<std::pair<int, int>> cells;
    for (int t : {10, 20, 50})
      for (int n : {2, 5, 10, 50}) cells.emplace_back(n, t);
    cells.emplace_back(2, 100);
    for (auto [n, t] : cells)
      for (Design d : {Design::iid, Design::toeplitz}) add(2, d, n, t, 5, 0, 0.0);
  } else if (name == "lasso-s1") {
    cfg.estimators = {Estimator::lasso, Estimator::ads_lasso};
    const double cors[] = {0.0, 0.5, 1.0};
    for (int t : {10, 25, 50})
      for (int n : {10, 50, 100})
        for (double cor : cors)
          for (Design d : {Design::iid, Design::toeplitz})
            add(4, d, n, t, 15, 5, cor);
  } else if (name == "lasso-s2") {
    cfg.estimators = {Estimator::lasso, Estimator::ads_lasso};
    for (int t : {10, 20, 50, 100})
      for (int n : {2, 5, 10, 50})
        for (Design d : {Design::iid, Design::toeplitz})
          add(3, d, n, t, 15, 5, 0.0);
  } else {
    throw ValidationError("unknown table '" + name + "'");
  }
  return cfg;
}

}  // namespace ads
