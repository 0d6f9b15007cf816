#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "adsmooth/ads.hpp"
#include "adsmooth/dgp.hpp"

namespace ads {

enum class Estimator { naive, ols, lasso, ads_ols, ads_lasso };

std::string estimator_name(Estimator e);
Estimator parse_estimator(const std::string& name);

/// Monte Carlo experiment: a grid of cells, the estimators to compare, and
/// the repetition budget. Cell seeds are derived from master_seed, the
/// cell's parameters and the repetition index, so results do not depend on
/// execution order or the `jobs` level.
struct SimConfig {
  std::vector<DgpConfig> cells;  // per-cell seed fields are ignored
  std::vector<Estimator> estimators;
  AdsConfig ads{};
  int reps = 500;
  std::uint64_t master_seed = 0;
  int jobs = 1;

  void validate() const;
};

struct CellResult {
  std::vector<MseRow> rows;  // empty when the cell failed
  int failed_reps = 0;
  bool failed = false;
  std::vector<std::string> rep_errors;  // distinct messages, capped
};

/// Canonical cell label, e.g. "dgp=2;design=iid;n=50;t=10;p=5;s=0;cor=-;sd=1".
std::string cell_id(const DgpConfig& cell);

/// Fit one estimator on a training panel (used by run_cell and the CLI).
CoefficientSet fit_estimator(const PanelDataset& train, Estimator estimator,
                             const AdsConfig& ads);

/// R repetitions of generate / fit / out-of-sample MSE for one cell.
/// Repetitions where any estimator fails are dropped from every mean; the
/// cell fails when more than 1% of repetitions fail.
CellResult run_cell(const DgpConfig& cell, const std::vector<Estimator>& estimators,
                    const AdsConfig& ads, int reps, std::uint64_t master_seed,
                    int jobs = 1);

using CellObserver =
    std::function<void(std::size_t index, std::size_t total,
                       const DgpConfig& cell, const CellResult& result)>;

/// run_cell over every cell, in order; failed cells are flagged, not fatal.
MseReport run_suite(const SimConfig& cfg, const CellObserver& observer = nullptr);

/// Preset grids named after the simulation tables:
/// linear-s1-iid, linear-s1-cor, linear-s2, lasso-s1, lasso-s2.
SimConfig paper_table(const std::string& name);

}  // namespace ads
