#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace acs {

struct Dataset {
  Eigen::MatrixXd inputs;    // N x d
  Eigen::VectorXd targets;   // N; real for regression, {0,1} for probit
  std::string name;
  std::vector<std::string> feature_names;

  int size() const { return static_cast<int>(inputs.rows()); }
  int dim() const { return static_cast<int>(inputs.cols()); }
};

// Parses a numeric CSV with a header row; the named column becomes the
// target. Raises DataError for a missing file, an unknown target column, or
// any cell that is empty, non-numeric or non-finite (reported by row and
// column).
Dataset load_csv(const std::string& path, const std::string& target_column);

// Disjoint, exhaustive shuffle split; the test set gets floor(N * fraction)
// rows. Deterministic given seed.
std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction,
                                  std::uint64_t seed);

// Per-column affine transform fitted on training data only (never the test
// split). Columns with zero spread get their std clamped to 1.
struct Standardizer {
  Eigen::VectorXd input_mean, input_std;
  double target_mean = 0.0, target_std = 1.0;
  bool targets_standardized = false;

  static Standardizer fit(const Dataset& train, bool standardize_targets);

  Eigen::MatrixXd transform_inputs(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd transform_targets(const Eigen::VectorXd& y) const;
  double untransform_prediction(double y_standardized) const;
};

}  // namespace acs
