#pragma once

#include <Eigen/Dense>
#include <functional>

#include "adsmooth/panel.hpp"

namespace ads {

/// Stacked observations for one weighted fit. Observation k is one
/// (design row, target) pair carrying a nonnegative weight; at least one
/// weight must be strictly positive.
struct WeightedSample {
  Eigen::MatrixXd rows;         // n_obs x (p+1)
  Eigen::VectorXd targets;      // n_obs
  Eigen::VectorXd obs_weights;  // n_obs

  void validate() const;
};

struct PenaltyRule {
  bool fixed = false;
  double lambda = 0.0;

  static PenaltyRule plugin() { return {}; }
  static PenaltyRule fixed_lambda(double lambda) { return {true, lambda}; }
};

struct LassoConfig {
  PenaltyRule penalty_rule{};
  double plugin_constant = 1.1;
  int max_sweeps = 1000;
  double tol = 1e-7;  // max absolute coefficient change per sweep
  bool penalize_intercept = true;
  bool standardize = false;

  void validate() const;
};

struct LassoResult {
  Eigen::VectorXd beta;
  bool converged = true;
  int sweeps = 0;
};

enum class Backend { ols, lasso };
enum class Stage { first, second };

/// sign(z) * max(|z| - kappa, 0)
double soft_threshold(double z, double kappa);

/// argmin_b sum_k w_k (y_k - x_k'b)^2. Singular or underdetermined systems
/// get the minimum-norm solution (SVD, relative cutoff 1e-10).
Eigen::VectorXd weighted_ols(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                             const Eigen::Ref<const Eigen::VectorXd>& targets,
                             const Eigen::Ref<const Eigen::VectorXd>& obs_weights);
Eigen::VectorXd weighted_ols(const WeightedSample& sample);

/// Called after every full coordinate-descent sweep with the penalized
/// objective value; used by tests to assert monotone descent.
using SweepObserver = std::function<void(int sweep, double objective)>;

/// Cyclic coordinate descent on
///   (1 / (2 sum_k w_k)) sum_k w_k (y_k - x_k'b)^2 + lambda ||b||_1
/// until the largest coefficient change in a sweep drops below cfg.tol.
/// With cfg.standardize, covariate columns are scaled to unit weighted
/// second moment internally and coefficients returned on the original scale.
LassoResult weighted_lasso(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                           const Eigen::Ref<const Eigen::VectorXd>& targets,
                           const Eigen::Ref<const Eigen::VectorXd>& obs_weights,
                           const LassoConfig& cfg, double lambda,
                           const SweepObserver& observer = nullptr);
LassoResult weighted_lasso(const WeightedSample& sample, const LassoConfig& cfg,
                           double lambda);

/// Penalized objective value at beta (beta on the original scale).
double lasso_objective(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                       const Eigen::Ref<const Eigen::VectorXd>& targets,
                       const Eigen::Ref<const Eigen::VectorXd>& obs_weights,
                       const LassoConfig& cfg, double lambda,
                       const Eigen::Ref<const Eigen::VectorXd>& beta);

/// Largest KKT violation at beta: |g_j| - lambda over inactive coordinates,
/// |g_j - lambda sign(beta_j)| over active ones, where g is the gradient of
/// the normalized weighted loss on the same (possibly standardized) problem
/// weighted_lasso solved. Nonpositive means the conditions hold exactly.
double lasso_kkt_violation(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                           const Eigen::Ref<const Eigen::VectorXd>& targets,
                           const Eigen::Ref<const Eigen::VectorXd>& obs_weights,
                           const LassoConfig& cfg, double lambda,
                           const Eigen::Ref<const Eigen::VectorXd>& beta);

/// Plug-in penalty c * sigma_hat * sqrt(2 log(p+1) / effective_n) with
/// sigma_hat refined by one pilot Lasso fit on the sample.
double plugin_lambda(const WeightedSample& sample, const LassoConfig& cfg,
                     Stage stage, double effective_n);
double plugin_lambda(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                     const Eigen::Ref<const Eigen::VectorXd>& targets,
                     const Eigen::Ref<const Eigen::VectorXd>& obs_weights,
                     const LassoConfig& cfg, Stage stage, double effective_n);

/// First-stage fit: individual i's T rows with unit weights, nothing else.
Eigen::VectorXd fit_individual(const PanelDataset& data, int i,
                               Backend estimator, const LassoConfig& cfg);

}  // namespace ads
