#pragma once

#include <cstdint>
#include <string>

#include "adsmooth/panel.hpp"
#include "adsmooth/rng.hpp"

namespace ads {

enum class Design { iid, toeplitz };

std::string design_name(Design d);
Design parse_design(const std::string& name);

/// Synthetic-panel parameters. DGPs 1 and 4 draw equicorrelated normal
/// coefficients (correlation beta_cor across individuals); DGPs 2 and 3
/// derive coefficients from a uniform index alpha_i. DGPs 3 and 4 zero out
/// all but the first s+1 components.
struct DgpConfig {
  int dgp = 1;
  int n = 1;
  int t = 1;
  int p = 1;   // covariates, excluding intercept
  int s = 0;   // nonzero covariates, DGP 3/4 only
  double beta_cor = 0.0;
  Design design = Design::iid;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
  // Sensitivity switch: start the DGP-2/3 offset at the first covariate
  // slot instead of the intercept slot.
  bool offset_on_covariates = false;

  void validate() const;
};

struct GeneratedPanel {
  PanelDataset train;
  PanelDataset test;
  CoefficientSet truth;
};

/// Per-individual T x (p+1) design draws from `rng`: intercept column of
/// ones, covariates N(0, I) or N(0, Sigma) with Toeplitz Sigma_kl = 0.5^|k-l|.
std::vector<Eigen::MatrixXd> gen_design(const DgpConfig& cfg, Rng& rng);

/// Equicorrelated coefficients: per component, beta_il = sqrt(rho) z_l +
/// sqrt(1 - rho) e_il; rho = 1 collapses to one shared draw exactly.
CoefficientSet gen_beta_dgp1(const DgpConfig& cfg, Rng& rng);

/// Index-driven coefficients: beta_i = 1 + (a, a^2, -a, -a^2, a/1, a/2, ...)
/// truncated to p+1 slots, alpha_i ~ U(0, 1).
CoefficientSet gen_beta_dgp2(const DgpConfig& cfg, Rng& rng);

/// Sparse variants: first s+1 components as DGP 2 (dgp = 3) or DGP 1
/// (dgp = 4), remaining p-s components exactly zero.
CoefficientSet gen_beta_sparse(const DgpConfig& cfg, Rng& rng);

/// One truth draw plus independent train/test panels of identical shape,
/// each carrying the noiseless signal. Sub-streams are derived per purpose
/// and individual, so e.g. changing T never alters the coefficient draw.
GeneratedPanel gen_panel(const DgpConfig& cfg);

}  // namespace ads
