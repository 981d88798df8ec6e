#pragma once

#include "fsor/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fsor {

/// Labeled dataset in feature-major layout: features(i, j) is feature i of
/// sample j. Labels are dense class ids 0..k-1; label_names keeps the
/// original label text per class id (first-appearance order for loaders).
struct Dataset {
  Matrix features;                         // d x n
  std::vector<int> labels;                 // n entries in 0..k-1
  std::vector<std::string> feature_names;  // empty or d entries
  std::vector<std::string> label_names;    // k entries

  Eigen::Index d() const { return features.rows(); }
  Eigen::Index n() const { return features.cols(); }
  int k() const { return static_cast<int>(label_names.size()); }

  /// Throws DataError when an invariant is broken: d >= 1, n >= 2, k >= 2,
  /// every class present, all feature values finite.
  void validate() const;
};

/// Builds a Dataset and validates it. When label_names is empty it is
/// derived as "0".."k-1" with k = max(labels)+1.
Dataset make_dataset(Matrix features, std::vector<int> labels,
                     std::vector<std::string> feature_names = {},
                     std::vector<std::string> label_names = {});

/// One-hot label encoding; k x n with {0,1} entries, each column sums to 1.
struct LabelMatrix {
  Matrix values;
};

struct SynthSpec {
  int n_samples = 0;
  int n_features = 0;
  int n_informative = 0;
  int n_classes = 0;
  double class_separation = 1.0;
  double noise_std = 1.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

LabelMatrix one_hot(const std::vector<int>& labels, int k);

/// H = I_n - (1/n) 1 1^T. Tests use the explicit matrix; production code
/// subtracts row means instead (center_rows).
Matrix centering_matrix(Eigen::Index n);

/// m * H without materializing H: subtracts the mean of each row.
Matrix center_rows(const Matrix& m);

/// Gaussian class-conditional generator. Features 0..n_informative-1 carry
/// class-dependent means spaced by class_separation; the rest are pure
/// noise. Deterministic for a fixed seed.
Dataset synthesize(const SynthSpec& spec);

/// Reads a comma-separated file, one sample per row. label_column names a
/// header column or is a zero-based column index. Features land in d x n
/// (transposed from the row-per-sample file layout); labels are re-indexed
/// densely in first-appearance order.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 bool has_header);

/// Writes a CSV loadable by load_csv (header row, label column last).
/// Floats are emitted with shortest round-trip formatting.
void save_csv(const Dataset& ds, const std::string& path);

/// Per-feature standardization to zero mean / unit variance (population
/// variance; constant features are centered only).
Dataset zscore_features(const Dataset& ds);

}  // namespace fsor
