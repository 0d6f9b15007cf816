#include "adsmooth/dgp.hpp"

#include <cmath>

#include "adsmooth/errors.hpp"

namespace ads {

namespace {

constexpr const char* kBetaTag = "beta";
constexpr const char* kTrainDesignTag = "train-design";
constexpr const char* kTrainNoiseTag = "train-noise";
constexpr const char* kTestDesignTag = "test-design";
constexpr const char* kTestNoiseTag = "test-noise";

Eigen::MatrixXd toeplitz_cholesky(int p) {
  Eigen::MatrixXd sigma(p, p);
  for (int k = 0; k < p; ++k)
    for (int l = 0; l < p; ++l) sigma(k, l) = std::pow(0.5, std::abs(k - l));
  return Eigen::LLT<Eigen::MatrixXd>(sigma).matrixL();
}

// One individual's T x (p+1) design. Draw order is row-major within the
// covariate block, so T only changes how many rows a stream yields.
Eigen::MatrixXd design_rows(const DgpConfig& cfg, int t, Rng& rng,
                            const Eigen::MatrixXd& chol) {
  Eigen::MatrixXd x(t, cfg.p + 1);
  x.col(0).setOnes();
  Eigen::VectorXd z(cfg.p);
  for (int r = 0; r < t; ++r) {
    for (int k = 0; k < cfg.p; ++k) z[k] = rng.normal();
    if (cfg.design == Design::toeplitz)
      x.row(r).tail(cfg.p) = (chol * z).transpose();
    else
      x.row(r).tail(cfg.p) = z.transpose();
  }
  return x;
}

// Components are independent; across individuals each component is
// equicorrelated with correlation rho. Both draws always happen so the
// stream position does not depend on rho.
Eigen::MatrixXd equicorrelated_block(int n, int dim, double rho, Rng& rng) {
  Eigen::MatrixXd beta(n, dim);
  const double shared = std::sqrt(rho);
  const double own = std::sqrt(1.0 - rho);
  for (int l = 0; l < dim; ++l) {
    const double z = rng.normal();
    for (int i = 0; i < n; ++i) {
      const double e = rng.normal();
      beta(i, l) = shared * z + own * e;
    }
  }
  return beta;
}

double alpha_offset(double a, int k) {
  switch (k) {
    case 0: return a;
    case 1: return a * a;
    case 2: return -a;
    case 3: return -a * a;
    default: return a / static_cast<double>(k - 3);
  }
}

Eigen::MatrixXd alpha_indexed_block(int n, int dim, bool on_covariates,
                                    Rng& rng) {
  Eigen::MatrixXd beta = Eigen::MatrixXd::Ones(n, dim);
  for (int i = 0; i < n; ++i) {
    const double a = rng.uniform();
    const int first = on_covariates ? 1 : 0;
    for (int k = first; k < dim; ++k) beta(i, k) += alpha_offset(a, k - first);
  }
  return beta;
}

PanelDataset assemble(const DgpConfig& cfg, const CoefficientSet& truth,
                      const char* design_tag, const char* noise_tag) {
  PanelDataset ds;
  ds.n_individuals = cfg.n;
  ds.n_periods = cfg.t;
  ds.n_covariates = cfg.p;
  ds.design.resize(cfg.n);
  ds.response.resize(cfg.n);
  ds.signal = std::vector<Eigen::VectorXd>(cfg.n);
  const Eigen::MatrixXd chol =
      cfg.design == Design::toeplitz ? toeplitz_cholesky(cfg.p) : Eigen::MatrixXd();
  for (int i = 0; i < cfg.n; ++i) {
    Rng design_rng(derive_stream(cfg.seed, design_tag, static_cast<std::uint64_t>(i)));
    ds.design[i] = design_rows(cfg, cfg.t, design_rng, chol);
    (*ds.signal)[i] = ds.design[i] * truth.coefs.row(i).transpose();
    Rng noise_rng(derive_stream(cfg.seed, noise_tag, static_cast<std::uint64_t>(i)));
    Eigen::VectorXd noise(cfg.t);
    for (int r = 0; r < cfg.t; ++r) noise[r] = cfg.noise_sd * noise_rng.normal();
    ds.response[i] = (*ds.signal)[i] + noise;
  }
  return ds;
}

}  // namespace

std::string design_name(Design d) {
  return d == Design::iid ? "iid" : "toeplitz";
}

Design parse_design(const std::string& name) {
  if (name == "iid") return Design::iid;
  if (name == "toeplitz") return Design::toeplitz;
  throw ValidationError("unknown design '" + name + "'");
}

void DgpConfig::validate() const {
  if (dgp < 1 || dgp > 4) throw ValidationError("dgp must be 1, 2, 3 or 4");
  if (n < 1 || t < 1 || p < 1)
    throw ValidationError("n, t and p must be positive");
  if (dgp == 3 || dgp == 4) {
    if (s < 0 || s > p) throw ValidationError("s must lie in [0, p]");
  }
  if (dgp == 1 || dgp == 4) {
    if (!(beta_cor >= 0.0) || beta_cor > 1.0)
      throw ValidationError("beta_cor must lie in [0, 1]");
  }
  if (!(noise_sd >= 0.0)) throw ValidationError("noise_sd must be nonnegative");
}

std::vector<Eigen::MatrixXd> gen_design(const DgpConfig& cfg, Rng& rng) {
  cfg.validate();
  const Eigen::MatrixXd chol =
      cfg.design == Design::toeplitz ? toeplitz_cholesky(cfg.p) : Eigen::MatrixXd();
  std::vector<Eigen::MatrixXd> out(cfg.n);
  for (int i = 0; i < cfg.n; ++i) out[i] = design_rows(cfg, cfg.t, rng, chol);
  return out;
}

CoefficientSet gen_beta_dgp1(const DgpConfig& cfg, Rng& rng) {
  if (!(cfg.beta_cor >= 0.0) || cfg.beta_cor > 1.0)
    throw ValidationError("beta_cor must lie in [0, 1]");
  return {equicorrelated_block(cfg.n, cfg.p + 1, cfg.beta_cor, rng)};
}

CoefficientSet gen_beta_dgp2(const DgpConfig& cfg, Rng& rng) {
  return {alpha_indexed_block(cfg.n, cfg.p + 1, cfg.offset_on_covariates, rng)};
}

CoefficientSet gen_beta_sparse(const DgpConfig& cfg, Rng& rng) {
  if (cfg.s > cfg.p) throw ValidationError("s must not exceed p");
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(cfg.n, cfg.p + 1);
  beta.leftCols(cfg.s + 1) =
      cfg.dgp == 3
          ? alpha_indexed_block(cfg.n, cfg.s + 1, cfg.offset_on_covariates, rng)
          : equicorrelated_block(cfg.n, cfg.s + 1, cfg.beta_cor, rng);
  return {beta};
}

GeneratedPanel gen_panel(const DgpConfig& cfg) {
  cfg.validate();
  Rng beta_rng(derive_stream(cfg.seed, kBetaTag));
  GeneratedPanel out;
  switch (cfg.dgp) {
    case 1: out.truth = gen_beta_dgp1(cfg, beta_rng); break;
    case 2: out.truth = gen_beta_dgp2(cfg, beta_rng); break;
    default: out.truth = gen_beta_sparse(cfg, beta_rng); break;
  }
  out.train = assemble(cfg, out.truth, kTrainDesignTag, kTrainNoiseTag);
  out.test = assemble(cfg, out.truth, kTestDesignTag, kTestNoiseTag);
  return out;
}

}  // namespace ads
