#include "adsmooth/estimators.hpp"

#include <cmath>
#include <string>

#include "adsmooth/errors.hpp"

namespace ads {

namespace {

void check_sample(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                  const Eigen::Ref<const Eigen::VectorXd>& targets,
                  const Eigen::Ref<const Eigen::VectorXd>& weights) {
  if (rows.rows() != targets.size() || rows.rows() != weights.size())
    throw DimensionError("sample rows/targets/weights lengths disagree");
  if (rows.rows() == 0) throw DegenerateInput("empty sample");
  if (!rows.allFinite() || !targets.allFinite() || !weights.allFinite())
    throw ValidationError("sample contains non-finite values");
  if ((weights.array() < 0.0).any())
    throw ValidationError("negative observation weight");
  if (!(weights.maxCoeff() > 0.0))
    throw DegenerateInput("all observation weights are zero");
}

// Column scales for the standardized problem: weighted root second moments,
// intercept column untouched. Zero-mass columns keep scale 1.
Eigen::VectorXd column_scales(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                              const Eigen::VectorXd& omega,
                              const LassoConfig& cfg) {
  const auto d = rows.cols();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(d);
  if (!cfg.standardize) return scale;
  for (Eigen::Index j = 1; j < d; ++j) {
    const double m2 = (omega.array() * rows.col(j).array().square()).sum();
    if (m2 > 0.0) scale[j] = std::sqrt(m2);
  }
  return scale;
}

// Gram form of the normalized weighted loss (1/2) sum_k omega_k (y - x'b)^2
// on the (possibly standardized) columns. Built once, solved for many
// lambdas; everything downstream is O(d^2) per sweep.
struct GramProblem {
  Eigen::MatrixXd gram;    // d x d
  Eigen::VectorXd moment;  // d
  double target_m2 = 0.0;  // sum_k omega_k y_k^2
  Eigen::VectorXd scale;   // column scales (ones when not standardizing)

  static GramProblem build(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                           const Eigen::Ref<const Eigen::VectorXd>& targets,
                           const Eigen::Ref<const Eigen::VectorXd>& weights,
                           const LassoConfig& cfg) {
    GramProblem p;
    const Eigen::VectorXd omega = weights / weights.sum();
    p.scale = column_scales(rows, omega, cfg);
    p.gram.noalias() = rows.transpose() * (omega.asDiagonal() * rows);
    p.moment.noalias() = rows.transpose() * (omega.asDiagonal() * targets);
    if (cfg.standardize) {
      p.gram = p.scale.cwiseInverse().asDiagonal() * p.gram *
               p.scale.cwiseInverse().asDiagonal();
      p.moment = p.moment.cwiseQuotient(p.scale);
    }
    p.target_m2 = (omega.array() * targets.array().square()).sum();
    return p;
  }

  // Coordinate descent; returns beta on the standardized scale.
  LassoResult solve(const LassoConfig& cfg, double lambda,
                    const SweepObserver& observer) const {
    const auto d = gram.cols();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd gram_beta = Eigen::VectorXd::Zero(d);
    LassoResult result;
    result.converged = false;
    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
      gram_beta.noalias() = gram * beta;  // refresh to cap incremental drift
      double max_delta = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double curvature = gram(j, j);
        double next;
        if (curvature <= 0.0) {
          next = 0.0;  // no weighted mass on this column
        } else {
          const double z = moment[j] - gram_beta[j] + curvature * beta[j];
          const bool penalized = cfg.penalize_intercept || j != 0;
          next = penalized ? soft_threshold(z, lambda) / curvature : z / curvature;
        }
        const double delta = next - beta[j];
        if (delta != 0.0) {
          gram_beta.noalias() += gram.col(j) * delta;
          beta[j] = next;
          max_delta = std::max(max_delta, std::abs(delta));
        }
      }
      result.sweeps = sweep;
      if (observer) {
        double l1 = 0.0;
        for (Eigen::Index j = 0; j < d; ++j)
          if (cfg.penalize_intercept || j != 0) l1 += std::abs(beta[j]);
        const double quad =
            0.5 * (beta.dot(gram * beta) - 2.0 * moment.dot(beta) + target_m2);
        observer(sweep, quad + lambda * l1);
      }
      if (max_delta < cfg.tol) {
        result.converged = true;
        break;
      }
    }
    result.beta = std::move(beta);
    return result;
  }

  // Weighted residual scale sqrt(sum_k omega_k r_k^2) at a standardized beta.
  double residual_std(const Eigen::VectorXd& beta) const {
    const double m2 =
        target_m2 - 2.0 * moment.dot(beta) + beta.dot(gram * beta);
    return std::sqrt(std::max(m2, 0.0));
  }

  // Residual scale of the least-squares refit on `support` (minimum-norm on
  // the Gram restriction). Free of the shrinkage bias a Lasso fit carries.
  double refit_residual_std(const std::vector<Eigen::Index>& support) const {
    if (support.empty()) return std::sqrt(std::max(target_m2, 0.0));
    const auto k = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd sub_gram(k, k);
    Eigen::VectorXd sub_moment(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      sub_moment[a] = moment[support[a]];
      for (Eigen::Index b = 0; b < k; ++b)
        sub_gram(a, b) = gram(support[a], support[b]);
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(sub_gram,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Eigen::VectorXd sub_beta = svd.solve(sub_moment);
    const double m2 = target_m2 - 2.0 * sub_moment.dot(sub_beta) +
                      sub_beta.dot(sub_gram * sub_beta);
    return std::sqrt(std::max(m2, 0.0));
  }
};

}  // namespace

void WeightedSample::validate() const {
  check_sample(rows, targets, obs_weights);
}

void LassoConfig::validate() const {
  if (tol <= 0.0) throw ValidationError("tol must be positive");
  if (max_sweeps < 1) throw ValidationError("max_sweeps must be at least 1");
  if (plugin_constant <= 0.0) throw ValidationError("plugin_constant must be positive");
  if (penalty_rule.fixed && penalty_rule.lambda < 0.0)
    throw ValidationError("fixed lambda must be nonnegative");
}

double soft_threshold(double z, double kappa) {
  if (z > kappa) return z - kappa;
  if (z < -kappa) return z + kappa;
  return 0.0;
}

Eigen::VectorXd weighted_ols(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                             const Eigen::Ref<const Eigen::VectorXd>& targets,
                             const Eigen::Ref<const Eigen::VectorXd>& obs_weights) {
  check_sample(rows, targets, obs_weights);
  const Eigen::VectorXd sqw = obs_weights.array().sqrt();
  const Eigen::MatrixXd scaled = sqw.asDiagonal() * rows;
  const Eigen::VectorXd rhs = sqw.array() * targets.array();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  return svd.solve(rhs);
}

Eigen::VectorXd weighted_ols(const WeightedSample& sample) {
  return weighted_ols(sample.rows, sample.targets, sample.obs_weights);
}

LassoResult weighted_lasso(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                           const Eigen::Ref<const Eigen::VectorXd>& targets,
                           const Eigen::Ref<const Eigen::VectorXd>& obs_weights,
                           const LassoConfig& cfg, double lambda,
                           const SweepObserver& observer) {
  check_sample(rows, targets, obs_weights);
  cfg.validate();
  if (lambda < 0.0) throw ValidationError("lambda must be nonnegative");
  const GramProblem problem = GramProblem::build(rows, targets, obs_weights, cfg);
  LassoResult result = problem.solve(cfg, lambda, observer);
  if (cfg.standardize) result.beta = result.beta.cwiseQuotient(problem.scale);
  return result;
}

LassoResult weighted_lasso(const WeightedSample& sample, const LassoConfig& cfg,
                           double lambda) {
  return weighted_lasso(sample.rows, sample.targets, sample.obs_weights, cfg,
                        lambda);
}

double lasso_objective(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                       const Eigen::Ref<const Eigen::VectorXd>& targets,
                       const Eigen::Ref<const Eigen::VectorXd>& obs_weights,
                       const LassoConfig& cfg, double lambda,
                       const Eigen::Ref<const Eigen::VectorXd>& beta) {
  check_sample(rows, targets, obs_weights);
  const Eigen::VectorXd omega = obs_weights / obs_weights.sum();
  const Eigen::VectorXd resid = targets - rows * beta;
  const double loss = 0.5 * (omega.array() * resid.array().square()).sum();
  const Eigen::VectorXd scale = column_scales(rows, omega, cfg);
  double l1 = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (cfg.penalize_intercept || j != 0) l1 += std::abs(beta[j] * scale[j]);
  return loss + lambda * l1;
}

double lasso_kkt_violation(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                           const Eigen::Ref<const Eigen::VectorXd>& targets,
                           const Eigen::Ref<const Eigen::VectorXd>& obs_weights,
                           const LassoConfig& cfg, double lambda,
                           const Eigen::Ref<const Eigen::VectorXd>& beta) {
  check_sample(rows, targets, obs_weights);
  const Eigen::VectorXd omega = obs_weights / obs_weights.sum();
  const Eigen::VectorXd scale = column_scales(rows, omega, cfg);
  const Eigen::VectorXd resid = targets - rows * beta;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    // Correlation-form gradient on the standardized problem.
    const double g =
        (omega.array() * rows.col(j).array() * resid.array()).sum() / scale[j];
    const bool penalized = cfg.penalize_intercept || j != 0;
    const double scaled_beta = beta[j] * scale[j];
    double violation;
    if (!penalized || scaled_beta != 0.0) {
      const double sgn = penalized ? (scaled_beta > 0.0 ? 1.0 : -1.0) : 0.0;
      violation = std::abs(g - lambda * sgn);
    } else {
      violation = std::abs(g) - lambda;
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

double plugin_lambda(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                     const Eigen::Ref<const Eigen::VectorXd>& targets,
                     const Eigen::Ref<const Eigen::VectorXd>& obs_weights,
                     const LassoConfig& cfg, Stage /*stage*/, double effective_n) {
  check_sample(rows, targets, obs_weights);
  cfg.validate();
  if (rows.cols() < 2)
    throw ValidationError("plug-in penalty needs at least one covariate");
  if (!(effective_n > 0.0))
    throw ValidationError("effective sample size must be positive");

  const double dim = static_cast<double>(rows.cols());
  const auto lambda_for = [&](double sigma) {
    return cfg.plugin_constant * sigma * std::sqrt(2.0 * std::log(dim) / effective_n);
  };

  const double n = static_cast<double>(targets.size());
  const double mean = targets.mean();
  const double sd0 = std::sqrt((targets.array() - mean).square().sum() / n);
  if (sd0 == 0.0) return 0.0;

  // Iterate pilot fits until the scale estimate settles. When the effective
  // sample comfortably identifies the active set (effective_n >= 2(p+1)) the
  // scale comes from a least-squares refit on it, which keeps the shrinkage
  // bias of the pilot out of lambda; in shorter samples the refit would
  // chase interpolation, so the pilot's own residual scale is used instead.
  const GramProblem problem = GramProblem::build(rows, targets, obs_weights, cfg);
  const bool refit_scale = effective_n >= 2.0 * dim;
  double sigma = sd0;
  for (int pass = 0; pass < 10; ++pass) {
    const LassoResult fit = problem.solve(cfg, lambda_for(sigma), nullptr);
    double next;
    if (refit_scale) {
      std::vector<Eigen::Index> support;
      for (Eigen::Index j = 0; j < fit.beta.size(); ++j)
        if (fit.beta[j] != 0.0 || (!cfg.penalize_intercept && j == 0))
          support.push_back(j);
      next = problem.refit_residual_std(support);
    } else {
      next = problem.residual_std(fit.beta);
    }
    const bool settled = std::abs(next - sigma) <= 1e-2 * sigma;
    sigma = next;
    if (settled || sigma == 0.0) break;
  }
  return lambda_for(sigma);
}

double plugin_lambda(const WeightedSample& sample, const LassoConfig& cfg,
                     Stage stage, double effective_n) {
  return plugin_lambda(sample.rows, sample.targets, sample.obs_weights, cfg,
                       stage, effective_n);
}

Eigen::VectorXd fit_individual(const PanelDataset& data, int i,
                               Backend estimator, const LassoConfig& cfg) {
  if (i < 0 || i >= data.n_individuals)
    throw std::out_of_range("individual index " + std::to_string(i) +
                            " outside [0, " + std::to_string(data.n_individuals) +
                            ")");
  const Eigen::VectorXd unit = Eigen::VectorXd::Ones(data.n_periods);
  if (estimator == Backend::ols)
    return weighted_ols(data.design[i], data.response[i], unit);
  const double lambda =
      cfg.penalty_rule.fixed
          ? cfg.penalty_rule.lambda
          : plugin_lambda(data.design[i], data.response[i], unit, cfg,
                          Stage::first, static_cast<double>(data.n_periods));
  return weighted_lasso(data.design[i], data.response[i], unit, cfg, lambda).beta;
}

}  // namespace ads
