#pragma once

#include "adsmooth/estimators.hpp"
#include "adsmooth/panel.hpp"

namespace ads {

struct GammaRule {
  bool median = true;
  double value = 0.0;

  static GammaRule median_heuristic() { return {}; }
  static GammaRule fixed(double gamma) { return {false, gamma}; }
};

struct AdsConfig {
  double delta = 0.5;
  GammaRule gamma_rule{};
  Backend estimator = Backend::ols;
  LassoConfig lasso_cfg{};
  int refine_iterations = 0;    // 0 = one-pass algorithm
  double refine_tol = 1e-3;     // max absolute weight change

  void validate() const;
};

struct AdsFit {
  CoefficientSet first_stage;
  WeightMatrix weights;
  CoefficientSet second_stage;
  double gamma = 0.0;  // resolved value behind `weights`
  int refine_steps = 0;
};

/// Squared Euclidean distance between two coefficient vectors.
double coef_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                     const Eigen::Ref<const Eigen::VectorXd>& b);

/// Fixed gamma, or ln(2) / median pairwise squared distance so the median
/// pair lands at weight delta/2. All-identical estimates give gamma 0.
double resolve_gamma(const CoefficientSet& first_stage, const AdsConfig& cfg);

/// W(i,i) = 1, W(i,j) = delta * exp(-gamma * ||b_i - b_j||^2).
WeightMatrix build_weight_matrix(const CoefficientSet& first_stage,
                                 const AdsConfig& cfg);

/// Three-step estimator: per-individual fits, similarity weights, weighted
/// re-estimation of every individual on the full stacked panel. Optional
/// refinement rebuilds the weights from the re-estimated coefficients and
/// repeats the last step until the weights settle.
AdsFit ads_fit(const PanelDataset& data, const AdsConfig& cfg);

/// Intercept-only baseline: beta_i = (mean(y_i), 0, ..., 0).
CoefficientSet naive_fit(const PanelDataset& data);

}  // namespace ads
