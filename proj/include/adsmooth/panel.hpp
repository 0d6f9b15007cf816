#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace ads {

/// Balanced panel: N individuals observed over T periods. Each design matrix
/// is T x (p+1) with column 0 identically one. `signal` carries the noiseless
/// values x_it'beta_i and is present for synthetic data only.
struct PanelDataset {
  int n_individuals = 0;
  int n_periods = 0;
  int n_covariates = 0;  // p, excluding the intercept

  std::vector<Eigen::MatrixXd> design;
  std::vector<Eigen::VectorXd> response;
  std::optional<std::vector<Eigen::VectorXd>> signal;

  void validate() const;
};

/// N x (p+1) matrix of per-individual coefficient vectors; row i is beta_i.
struct CoefficientSet {
  Eigen::MatrixXd coefs;

  void validate() const;
};

/// N x N similarity weights: unit diagonal, symmetric, off-diagonal in
/// [0, delta] (the kernel value is strictly positive but may underflow).
struct WeightMatrix {
  Eigen::MatrixXd w;

  void validate(double delta) const;
};

struct MseRow {
  int dgp = 0;
  std::string design;  // "iid" | "toeplitz"
  int n = 0;
  int t = 0;
  std::optional<double> cor;
  std::string estimator;
  double mse = 0.0;
  double mc_stderr = 0.0;
  int reps = 0;
};

/// Per-cell out-of-sample MSE results plus any cells that failed outright.
struct MseReport {
  std::vector<MseRow> rows;
  std::vector<std::string> failed_cells;
};

/// prediction[i][t] = design[i].row(t) . coefs.row(i)
std::vector<Eigen::VectorXd> predict(const PanelDataset& data,
                                     const CoefficientSet& coefs);

/// (1 / (N*T)) sum over all (i, t) of squared prediction error.
double mse_against(const std::vector<Eigen::VectorXd>& predictions,
                   const std::vector<Eigen::VectorXd>& targets);

/// The noiseless signal when present (synthetic data), else the response.
const std::vector<Eigen::VectorXd>& evaluation_targets(const PanelDataset& data);

}  // namespace ads
