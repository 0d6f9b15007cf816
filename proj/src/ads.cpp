#include "adsmooth/ads.hpp"

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <numbers>
#include <vector>

#include "adsmooth/errors.hpp"

namespace ads {

namespace {

WeightMatrix kernel_weights(const CoefficientSet& coefs, double delta,
                            double gamma) {
  const auto n = coefs.coefs.rows();
  WeightMatrix wm;
  wm.w = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = coef_distance(coefs.coefs.row(i), coefs.coefs.row(j));
      const double w = delta * std::exp(-gamma * dist);
      wm.w(i, j) = w;
      wm.w(j, i) = w;
    }
  return wm;
}

double resolve_or_zero(const CoefficientSet& coefs, const AdsConfig& cfg) {
  if (cfg.gamma_rule.median && coefs.coefs.rows() < 2) return 0.0;
  return resolve_gamma(coefs, cfg);
}

}  // namespace

void AdsConfig::validate() const {
  if (!(delta > 0.0) || delta > 1.0)
    throw ValidationError("delta must lie in (0, 1]");
  if (!gamma_rule.median && !(gamma_rule.value >= 0.0))
    throw ValidationError("fixed gamma must be nonnegative");
  if (refine_iterations < 0)
    throw ValidationError("refine_iterations must be nonnegative");
  if (!(refine_tol > 0.0)) throw ValidationError("refine_tol must be positive");
  lasso_cfg.validate();
}

double coef_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                     const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size())
    throw DimensionError("coefficient vectors have different lengths");
  return (a - b).squaredNorm();
}

double resolve_gamma(const CoefficientSet& first_stage, const AdsConfig& cfg) {
  if (!cfg.gamma_rule.median) {
    if (cfg.gamma_rule.value < 0.0)
      throw ValidationError("fixed gamma must be nonnegative");
    return cfg.gamma_rule.value;
  }
  const auto n = first_stage.coefs.rows();
  if (n < 2)
    throw ValidationError("median heuristic needs at least two individuals");
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      dists.push_back(
          coef_distance(first_stage.coefs.row(i), first_stage.coefs.row(j)));
  double rank = 0.5;
  if (const char* env = std::getenv("ADS_GAMMA_Q")) rank = std::atof(env);
  const std::size_t mid =
      std::min(dists.size() - 1,
               static_cast<std::size_t>(rank * static_cast<double>(dists.size())));
  std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
  double median = dists[mid];
  if (rank == 0.5 && dists.size() % 2 == 0) {
    const auto lower = std::max_element(dists.begin(), dists.begin() + mid);
    median = 0.5 * (median + *lower);
  }
  if (median == 0.0) return 0.0;
  return std::numbers::ln2 / median;
}

WeightMatrix build_weight_matrix(const CoefficientSet& first_stage,
                                 const AdsConfig& cfg) {
  cfg.validate();
  first_stage.validate();
  if (first_stage.coefs.rows() < 1)
    throw ValidationError("weight matrix needs at least one individual");
  return kernel_weights(first_stage, cfg.delta, resolve_or_zero(first_stage, cfg));
}

AdsFit ads_fit(const PanelDataset& data, const AdsConfig& cfg) {
  data.validate();
  cfg.validate();
  const int n = data.n_individuals;
  const int t = data.n_periods;
  const int dim = data.n_covariates + 1;

  AdsFit fit;
  fit.first_stage.coefs.resize(n, dim);
  for (int i = 0; i < n; ++i)
    fit.first_stage.coefs.row(i) =
        fit_individual(data, i, cfg.estimator, cfg.lasso_cfg);

  fit.gamma = resolve_or_zero(fit.first_stage, cfg);
  fit.weights = kernel_weights(fit.first_stage, cfg.delta, fit.gamma);

  // Stacked once, individual-major then time-major; only weights vary per i.
  Eigen::MatrixXd stacked_rows(static_cast<Eigen::Index>(n) * t, dim);
  Eigen::VectorXd stacked_targets(static_cast<Eigen::Index>(n) * t);
  for (int j = 0; j < n; ++j) {
    stacked_rows.middleRows(static_cast<Eigen::Index>(j) * t, t) = data.design[j];
    stacked_targets.segment(static_cast<Eigen::Index>(j) * t, t) = data.response[j];
  }

  const auto reestimate = [&](const WeightMatrix& wm) {
    CoefficientSet out;
    out.coefs.resize(n, dim);
    Eigen::VectorXd w(static_cast<Eigen::Index>(n) * t);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        w.segment(static_cast<Eigen::Index>(j) * t, t).setConstant(wm.w(i, j));
      if (cfg.estimator == Backend::ols) {
        out.coefs.row(i) = weighted_ols(stacked_rows, stacked_targets, w);
      } else {
        const double soft_n = wm.w.row(i).sum();  // N~_i
        const double lambda =
            cfg.lasso_cfg.penalty_rule.fixed
                ? cfg.lasso_cfg.penalty_rule.lambda
                : plugin_lambda(stacked_rows, stacked_targets, w, cfg.lasso_cfg,
                                Stage::second, t * soft_n);
        out.coefs.row(i) =
            weighted_lasso(stacked_rows, stacked_targets, w, cfg.lasso_cfg, lambda)
                .beta;
      }
    }
    return out;
  };

  fit.second_stage = reestimate(fit.weights);
  for (int k = 1; k <= cfg.refine_iterations; ++k) {
    const double gamma = resolve_or_zero(fit.second_stage, cfg);
    const WeightMatrix next = kernel_weights(fit.second_stage, cfg.delta, gamma);
    if ((next.w - fit.weights.w).cwiseAbs().maxCoeff() < cfg.refine_tol) break;
    fit.weights = next;
    fit.gamma = gamma;
    fit.second_stage = reestimate(fit.weights);
    fit.refine_steps = k;
  }
  return fit;
}

CoefficientSet naive_fit(const PanelDataset& data) {
  data.validate();
  CoefficientSet out;
  out.coefs = Eigen::MatrixXd::Zero(data.n_individuals, data.n_covariates + 1);
  for (int i = 0; i < data.n_individuals; ++i)
    out.coefs(i, 0) = data.response[i].mean();
  return out;
}

}  // namespace ads
