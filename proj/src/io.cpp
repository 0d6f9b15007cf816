#include "adsmooth/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "adsmooth/errors.hpp"

namespace ads {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& field, const std::string& column,
                    std::size_t line_no, const std::filesystem::path& path) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE ||
      !std::isfinite(value))
    throw ParseError(path.string() + ":" + std::to_string(line_no) +
                     ": column '" + column + "' is not numeric: '" + field + "'");
  return value;
}

long long parse_time(const std::string& field, const std::string& column,
                     std::size_t line_no, const std::filesystem::path& path) {
  errno = 0;
  char* end = nullptr;
  const long long value = std::strtoll(field.c_str(), &end, 10);
  if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE)
    throw ParseError(path.string() + ":" + std::to_string(line_no) +
                     ": column '" + column + "' is not an integer: '" + field + "'");
  return value;
}

std::string format_fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string format_cor(const std::optional<double>& cor) {
  if (!cor) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", *cor);
  return buf;
}

struct RawFile {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

RawFile read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  RawFile raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = split_line(line);
    if (raw.header.empty()) {
      raw.header = std::move(fields);
      continue;
    }
    if (fields.size() != raw.header.size())
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(raw.header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    raw.rows.push_back(std::move(fields));
    raw.line_numbers.push_back(line_no);
  }
  if (raw.header.empty())
    throw SchemaError("'" + path.string() + "' has no header row");
  return raw;
}

std::size_t column_index(const RawFile& raw, const std::string& name,
                         const std::filesystem::path& path) {
  const auto it = std::find(raw.header.begin(), raw.header.end(), name);
  if (it == raw.header.end())
    throw SchemaError("'" + path.string() + "' has no column '" + name + "'");
  return static_cast<std::size_t>(it - raw.header.begin());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

LongPanel read_long_csv(const std::filesystem::path& path,
                        const std::string& y_column,
                        const std::string& id_column,
                        const std::string& time_column) {
  const RawFile raw = read_csv_file(path);
  const std::size_t y_ix = column_index(raw, y_column, path);
  const std::size_t id_ix = column_index(raw, id_column, path);
  const std::size_t time_ix = column_index(raw, time_column, path);

  std::vector<std::size_t> cov_ix;
  std::vector<std::string> cov_names;
  for (std::size_t c = 0; c < raw.header.size(); ++c)
    if (c != y_ix && c != id_ix && c != time_ix) {
      cov_ix.push_back(c);
      cov_names.push_back(raw.header[c]);
    }
  if (cov_ix.empty())
    throw SchemaError("'" + path.string() + "' has no covariate columns");

  struct Obs {
    long long time;
    double y;
    std::vector<double> x;
  };
  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> id_pos;
  std::vector<std::vector<Obs>> obs;

  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& fields = raw.rows[r];
    const std::size_t line_no = raw.line_numbers[r];
    Obs o;
    o.time = parse_time(fields[time_ix], time_column, line_no, path);
    o.y = parse_double(fields[y_ix], y_column, line_no, path);
    o.x.resize(cov_ix.size());
    for (std::size_t c = 0; c < cov_ix.size(); ++c)
      o.x[c] = parse_double(fields[cov_ix[c]], cov_names[c], line_no, path);
    const std::string& id = fields[id_ix];
    auto [it, inserted] = id_pos.try_emplace(id, ids.size());
    if (inserted) {
      ids.push_back(id);
      obs.emplace_back();
    }
    obs[it->second].push_back(std::move(o));
  }
  if (ids.empty()) throw ValidationError("'" + path.string() + "' has no data rows");

  std::size_t t_min = obs[0].size(), t_max = obs[0].size();
  for (const auto& v : obs) {
    t_min = std::min(t_min, v.size());
    t_max = std::max(t_max, v.size());
  }
  if (t_max > 10 * t_min)
    throw ValidationError("panel too unbalanced: individual lengths range " +
                          std::to_string(t_min) + ".." + std::to_string(t_max));

  LongPanel panel;
  panel.ids = ids;
  panel.covariate_columns = cov_names;
  panel.data.n_individuals = static_cast<int>(ids.size());
  panel.data.n_periods = static_cast<int>(t_min);
  panel.data.n_covariates = static_cast<int>(cov_names.size());
  panel.data.design.resize(ids.size());
  panel.data.response.resize(ids.size());
  panel.times.resize(ids.size());

  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto& list = obs[i];
    std::stable_sort(list.begin(), list.end(),
                     [](const Obs& a, const Obs& b) { return a.time < b.time; });
    for (std::size_t k = 1; k < list.size(); ++k)
      if (list[k].time == list[k - 1].time)
        throw ValidationError("duplicate (id, time) pair: id '" + ids[i] +
                              "', time " + std::to_string(list[k].time));
    Eigen::MatrixXd design(t_min, cov_names.size() + 1);
    Eigen::VectorXd y(t_min);
    for (std::size_t r = 0; r < t_min; ++r) {
      design(r, 0) = 1.0;
      for (std::size_t c = 0; c < cov_names.size(); ++c)
        design(r, c + 1) = list[r].x[c];
      y[r] = list[r].y;
      panel.times[i].push_back(list[r].time);
    }
    panel.data.design[i] = std::move(design);
    panel.data.response[i] = std::move(y);
  }
  panel.data.validate();
  return panel;
}

std::pair<PanelDataset, PanelDataset> chronological_split(
    const PanelDataset& data, double test_fraction) {
  data.validate();
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
    throw ValidationError("test_fraction must lie in (0, 1)");
  const int test_t = static_cast<int>(std::floor(data.n_periods * test_fraction));
  const int train_t = data.n_periods - test_t;
  if (test_t < 1 || train_t < 1)
    throw ValidationError("split leaves an empty train or test panel");

  const auto take = [&](int start, int count) {
    PanelDataset out;
    out.n_individuals = data.n_individuals;
    out.n_periods = count;
    out.n_covariates = data.n_covariates;
    out.design.resize(data.design.size());
    out.response.resize(data.response.size());
    if (data.signal) out.signal = std::vector<Eigen::VectorXd>(data.design.size());
    for (std::size_t i = 0; i < data.design.size(); ++i) {
      out.design[i] = data.design[i].middleRows(start, count);
      out.response[i] = data.response[i].segment(start, count);
      if (data.signal) (*out.signal)[i] = (*data.signal)[i].segment(start, count);
    }
    return out;
  };
  return {take(0, train_t), take(train_t, test_t)};
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown") return ReportFormat::markdown;
  throw ValidationError("unknown report format '" + name + "'");
}

std::string render_report(const MseReport& report, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::csv) {
    out += "dgp,design,n,t,cor,estimator,mse,mc_stderr,reps\n";
    for (const auto& row : report.rows) {
      out += std::to_string(row.dgp) + "," + row.design + "," +
             std::to_string(row.n) + "," + std::to_string(row.t) + "," +
             format_cor(row.cor) + "," + row.estimator + "," +
             format_fixed4(row.mse) + "," + format_fixed4(row.mc_stderr) + "," +
             std::to_string(row.reps) + "\n";
    }
    return out;
  }
  out += "| dgp | design | n | t | cor | estimator | mse | mc_stderr | reps |\n";
  out += "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& row : report.rows) {
    out += "| " + std::to_string(row.dgp) + " | " + row.design + " | " +
           std::to_string(row.n) + " | " + std::to_string(row.t) + " | " +
           format_cor(row.cor) + " | " + row.estimator + " | " +
           format_fixed4(row.mse) + " | " + format_fixed4(row.mc_stderr) +
           " | " + std::to_string(row.reps) + " |\n";
  }
  return out;
}

void write_report(const MseReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
  write_text(path, render_report(report, format));
}

void write_long_csv(const PanelDataset& data, const std::filesystem::path& path) {
  data.validate();
  std::string out = "id,time,y";
  for (int c = 1; c <= data.n_covariates; ++c) out += ",x" + std::to_string(c);
  out += "\n";
  char buf[64];
  for (int i = 0; i < data.n_individuals; ++i)
    for (int r = 0; r < data.n_periods; ++r) {
      out += std::to_string(i + 1) + "," + std::to_string(r + 1);
      std::snprintf(buf, sizeof(buf), ",%.17g", data.response[i][r]);
      out += buf;
      for (int c = 1; c <= data.n_covariates; ++c) {
        std::snprintf(buf, sizeof(buf), ",%.17g", data.design[i](r, c));
        out += buf;
      }
      out += "\n";
    }
  write_text(path, out);
}

void save_model_bundle(const ModelBundle& bundle,
                       const std::filesystem::path& dir) {
  const auto n = bundle.coefs.rows();
  if (static_cast<Eigen::Index>(bundle.ids.size()) != n ||
      bundle.weights.rows() != n || bundle.weights.cols() != n)
    throw DimensionError("model bundle pieces disagree on N");
  std::filesystem::create_directories(dir);
  char buf[64];

  std::string coefs = "id";
  for (Eigen::Index c = 0; c < bundle.coefs.cols(); ++c)
    coefs += ",b" + std::to_string(c);
  coefs += "\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    coefs += bundle.ids[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < bundle.coefs.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), ",%.17g", bundle.coefs(i, c));
      coefs += buf;
    }
    coefs += "\n";
  }
  write_text(dir / "coefs.csv", coefs);

  std::string weights = "id";
  for (Eigen::Index j = 0; j < n; ++j)
    weights += ",w" + std::to_string(j);
  weights += "\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    weights += bundle.ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf), ",%.17g", bundle.weights(i, j));
      weights += buf;
    }
    weights += "\n";
  }
  write_text(dir / "weights.csv", weights);

  std::string meta = "key,value\n";
  for (const auto& [k, v] : bundle.meta) meta += k + "," + v + "\n";
  write_text(dir / "meta.csv", meta);
}

ModelBundle load_model_bundle(const std::filesystem::path& dir) {
  ModelBundle bundle;

  const RawFile coefs = read_csv_file(dir / "coefs.csv");
  if (coefs.header.empty() || coefs.header[0] != "id")
    throw SchemaError("coefs.csv must start with an id column");
  const std::size_t n = coefs.rows.size();
  const std::size_t dim = coefs.header.size() - 1;
  if (n == 0 || dim == 0) throw ValidationError("coefs.csv is empty");
  bundle.coefs.resize(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    bundle.ids.push_back(coefs.rows[i][0]);
    for (std::size_t c = 0; c < dim; ++c)
      bundle.coefs(i, c) = parse_double(coefs.rows[i][c + 1],
                                        coefs.header[c + 1],
                                        coefs.line_numbers[i], dir / "coefs.csv");
  }

  const RawFile weights = read_csv_file(dir / "weights.csv");
  if (weights.rows.size() != n || weights.header.size() != n + 1)
    throw DimensionError("weights.csv shape does not match coefs.csv");
  bundle.weights.resize(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      bundle.weights(i, j) = parse_double(weights.rows[i][j + 1],
                                          weights.header[j + 1],
                                          weights.line_numbers[i],
                                          dir / "weights.csv");

  const RawFile meta = read_csv_file(dir / "meta.csv");
  for (std::size_t r = 0; r < meta.rows.size(); ++r) {
    if (meta.rows[r].size() < 2)
      throw ParseError("meta.csv line " + std::to_string(meta.line_numbers[r]) +
                       " is not a key,value pair");
    std::string value = meta.rows[r][1];
    for (std::size_t extra = 2; extra < meta.rows[r].size(); ++extra)
      value += "," + meta.rows[r][extra];  // values may contain commas (lists)
    bundle.meta[meta.rows[r][0]] = value;
  }
  return bundle;
}

LongRows read_long_rows(const std::filesystem::path& path,
                        const std::string& id_column,
                        const std::string& time_column,
                        const std::vector<std::string>& covariate_columns) {
  const RawFile raw = read_csv_file(path);
  const std::size_t id_ix = column_index(raw, id_column, path);
  const std::size_t time_ix = column_index(raw, time_column, path);
  std::vector<std::size_t> cov_ix;
  for (const auto& name : covariate_columns)
    cov_ix.push_back(column_index(raw, name, path));

  LongRows rows;
  rows.design.resize(raw.rows.size(), cov_ix.size() + 1);
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    rows.id.push_back(raw.rows[r][id_ix]);
    rows.time.push_back(
        parse_time(raw.rows[r][time_ix], time_column, raw.line_numbers[r], path));
    rows.design(r, 0) = 1.0;
    for (std::size_t c = 0; c < cov_ix.size(); ++c)
      rows.design(r, c + 1) =
          parse_double(raw.rows[r][cov_ix[c]], covariate_columns[c],
                       raw.line_numbers[r], path);
  }
  return rows;
}

}  // namespace ads
