#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "adsmooth/panel.hpp"

namespace ads {

/// A balanced panel read from long-format CSV, keeping the original
/// individual ids and (post-truncation) time stamps for reporting.
struct LongPanel {
  PanelDataset data;
  std::vector<std::string> ids;                  // per individual, file order
  std::vector<std::vector<long long>> times;     // per individual, ascending
  std::vector<std::string> covariate_columns;    // header order
};

/// Long format: one row per (individual, period). Every column other than
/// the three named ones is a numeric covariate. Individuals are truncated
/// to the shortest individual's length (in time order) to balance the
/// panel; a max/min length ratio above 10 is rejected.
LongPanel read_long_csv(const std::filesystem::path& path,
                        const std::string& y_column,
                        const std::string& id_column,
                        const std::string& time_column);

/// Per individual, the last floor(T * test_fraction) periods become the
/// test set and the earlier ones the training set.
std::pair<PanelDataset, PanelDataset> chronological_split(
    const PanelDataset& data, double test_fraction);

enum class ReportFormat { csv, markdown };

ReportFormat parse_report_format(const std::string& name);
std::string render_report(const MseReport& report, ReportFormat format);
void write_report(const MseReport& report, const std::filesystem::path& path,
                  ReportFormat format);

/// Long-format export of a dataset (header id,time,y,x1..xp), full double
/// precision; the inverse of read_long_csv for synthetic data.
void write_long_csv(const PanelDataset& data, const std::filesystem::path& path);

/// Fitted model persisted as a directory of CSVs: coefs.csv, weights.csv
/// and meta.csv (key,value pairs; includes the covariate column order).
struct ModelBundle {
  std::vector<std::string> ids;
  Eigen::MatrixXd coefs;    // N x (p+1)
  Eigen::MatrixXd weights;  // N x N
  std::map<std::string, std::string> meta;
};

void save_model_bundle(const ModelBundle& bundle,
                       const std::filesystem::path& dir);
ModelBundle load_model_bundle(const std::filesystem::path& dir);

/// Unbalanced per-row view used at prediction time; y is not required.
struct LongRows {
  std::vector<std::string> id;     // per row
  std::vector<long long> time;     // per row
  Eigen::MatrixXd design;          // rows x (p+1), intercept prepended
};

LongRows read_long_rows(const std::filesystem::path& path,
                        const std::string& id_column,
                        const std::string& time_column,
                        const std::vector<std::string>& covariate_columns);

}  // namespace ads
