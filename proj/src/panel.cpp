#include "adsmooth/panel.hpp"

#include <cstddef>

#include "adsmooth/errors.hpp"

namespace ads {

void PanelDataset::validate() const {
  if (n_individuals < 1 || n_periods < 1 || n_covariates < 1)
    throw ValidationError("panel dimensions must be positive");
  const auto n = static_cast<std::size_t>(n_individuals);
  if (design.size() != n || response.size() != n)
    throw DimensionError("design/response count does not match n_individuals");
  for (int i = 0; i < n_individuals; ++i) {
    if (design[i].rows() != n_periods || design[i].cols() != n_covariates + 1)
      throw DimensionError("design[" + std::to_string(i) + "] has wrong shape");
    if (response[i].size() != n_periods)
      throw DimensionError("response[" + std::to_string(i) + "] has wrong length");
    if ((design[i].col(0).array() != 1.0).any())
      throw ValidationError("design[" + std::to_string(i) +
                            "] column 0 is not the intercept");
  }
  if (signal) {
    if (signal->size() != n)
      throw DimensionError("signal count does not match n_individuals");
    for (int i = 0; i < n_individuals; ++i)
      if ((*signal)[i].size() != n_periods)
        throw DimensionError("signal[" + std::to_string(i) + "] has wrong length");
  }
}

void CoefficientSet::validate() const {
  if (!coefs.allFinite())
    throw ValidationError("coefficient set contains non-finite entries");
}

void WeightMatrix::validate(double delta) const {
  const auto n = w.rows();
  if (w.cols() != n) throw DimensionError("weight matrix is not square");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w(i, i) != 1.0) throw ValidationError("weight matrix diagonal is not 1");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (w(i, j) != w(j, i)) throw ValidationError("weight matrix is not symmetric");
      if (!(w(i, j) >= 0.0) || w(i, j) > delta)
        throw ValidationError("off-diagonal weight outside [0, delta]");
    }
  }
}

std::vector<Eigen::VectorXd> predict(const PanelDataset& data,
                                     const CoefficientSet& coefs) {
  if (coefs.coefs.rows() != data.n_individuals ||
      coefs.coefs.cols() != data.n_covariates + 1)
    throw DimensionError("coefficient set shape does not match the dataset");
  std::vector<Eigen::VectorXd> out(data.design.size());
  for (std::size_t i = 0; i < data.design.size(); ++i)
    out[i] = data.design[i] * coefs.coefs.row(i).transpose();
  return out;
}

double mse_against(const std::vector<Eigen::VectorXd>& predictions,
                   const std::vector<Eigen::VectorXd>& targets) {
  if (predictions.size() != targets.size())
    throw DimensionError("prediction/target count mismatch");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].size() != targets[i].size())
      throw DimensionError("prediction/target length mismatch at individual " +
                           std::to_string(i));
    sum += (predictions[i] - targets[i]).squaredNorm();
    count += static_cast<std::size_t>(predictions[i].size());
  }
  if (count == 0) throw DimensionError("empty prediction set");
  return sum / static_cast<double>(count);
}

const std::vector<Eigen::VectorXd>& evaluation_targets(const PanelDataset& data) {
  return data.signal ? *data.signal : data.response;
}

}  // namespace ads
