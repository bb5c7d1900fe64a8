#include "acs/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "acs/error.hpp"
#include "acs/rng.hpp"

namespace acs {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string cell = line.substr(start, comma == std::string::npos ? comma : comma - start);
    // Trim surrounding whitespace and a trailing CR.
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ' || cell.back() == '\t')) {
      cell.pop_back();
    }
    std::size_t lead = 0;
    while (lead < cell.size() && (cell[lead] == ' ' || cell[lead] == '\t')) ++lead;
    cells.push_back(cell.substr(lead));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, int row, const std::string& column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw DataError("non-numeric cell '" + cell + "' at data row " + std::to_string(row) +
                    ", column '" + column + "'");
  }
  if (!std::isfinite(value)) {
    throw DataError("non-finite value at data row " + std::to_string(row) + ", column '" +
                    column + "'");
  }
  return value;
}

Dataset take_rows(const Dataset& data, const std::vector<int>& rows) {
  Dataset out;
  out.name = data.name;
  out.feature_names = data.feature_names;
  out.inputs.resize(rows.size(), data.dim());
  out.targets.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.inputs.row(i) = data.inputs.row(rows[i]);
    out.targets[i] = data.targets[rows[i]];
  }
  return out;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& target_column) {
  std::ifstream file(path);
  if (!file) throw DataError("cannot open file: " + path);

  std::string line;
  if (!std::getline(file, line)) throw DataError("empty file: " + path);
  const std::vector<std::string> header = split_line(line);

  int target_idx = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == target_column) target_idx = static_cast<int>(i);
  }
  if (target_idx < 0) {
    throw DataError("target column '" + target_column + "' not found in " + path);
  }

  std::vector<std::vector<double>> rows;
  int row_number = 0;
  while (std::getline(file, line)) {
    ++row_number;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(row_number) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    }
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      values[c] = parse_cell(cells[c], row_number, header[c]);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw DataError("no data rows in " + path);

  Dataset data;
  data.name = path;
  const int d = static_cast<int>(header.size()) - 1;
  data.inputs.resize(rows.size(), d);
  data.targets.resize(rows.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (static_cast<int>(i) != target_idx) data.feature_names.push_back(header[i]);
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    int col = 0;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (static_cast<int>(c) == target_idx) {
        data.targets[r] = rows[r][c];
      } else {
        data.inputs(r, col++) = rows[r][c];
      }
    }
  }
  return data;
}

std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction,
                                  std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("split: test_fraction must be in (0,1)");
  }
  const int n = data.size();
  const int n_test = static_cast<int>(std::floor(n * test_fraction));
  if (n_test < 1 || n - n_test < 1) {
    throw DataError("split: degenerate sizes (N=" + std::to_string(n) + ", fraction=" +
                    std::to_string(test_fraction) + ")");
  }
  std::vector<int> order = sample_without_replacement(n, n, seed);
  const std::vector<int> test_rows(order.begin(), order.begin() + n_test);
  const std::vector<int> train_rows(order.begin() + n_test, order.end());
  return {take_rows(data, train_rows), take_rows(data, test_rows)};
}

Standardizer Standardizer::fit(const Dataset& train, bool standardize_targets) {
  Standardizer s;
  const int n = train.size();
  s.input_mean = train.inputs.colwise().mean();
  s.input_std.resize(train.dim());
  for (int c = 0; c < train.dim(); ++c) {
    const double var =
        (train.inputs.col(c).array() - s.input_mean[c]).square().sum() / n;
    const double sd = std::sqrt(var);
    s.input_std[c] = sd > 1e-12 ? sd : 1.0;
  }
  s.targets_standardized = standardize_targets;
  if (standardize_targets) {
    s.target_mean = train.targets.mean();
    const double var = (train.targets.array() - s.target_mean).square().sum() / n;
    const double sd = std::sqrt(var);
    s.target_std = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::transform_inputs(const Eigen::MatrixXd& X) const {
  return (X.rowwise() - input_mean.transpose()).array().rowwise() /
         input_std.transpose().array();
}

Eigen::VectorXd Standardizer::transform_targets(const Eigen::VectorXd& y) const {
  if (!targets_standardized) return y;
  return (y.array() - target_mean) / target_std;
}

double Standardizer::untransform_prediction(double y_standardized) const {
  if (!targets_standardized) return y_standardized;
  return y_standardized * target_std + target_mean;
}

}  // namespace acs
