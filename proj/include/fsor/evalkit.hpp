#pragma once

#include "fsor/common.hpp"
#include "fsor/dataset.hpp"

#include <cstdint>
#include <string>
#include <utility>

namespace fsor {

struct SplitSpec {
  double train_fraction = 0.7;
  int n_trials = 100;
  std::uint64_t seed = 0;
  bool stratified = true;

  void validate() const;
};

struct Split {
  std::vector<int> train;
  std::vector<int> test;
};

struct SizeMetrics {
  int m = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double macro_sensitivity = 0.0;
  double macro_specificity = 0.0;
};

struct EvalReport {
  std::vector<SizeMetrics> per_size;  // sorted ascending in m
  std::string classifier_name;
  // classes that never appeared in a trial's test split, summed over trials
  int excluded_class_trials = 0;
};

/// The split sequence for a label vector: deterministic for a fixed seed,
/// shared across every feature-set size (paired comparisons). Stratified
/// splits draw round(train_fraction * n_c) samples per class.
std::vector<Split> make_splits(const std::vector<int>& labels, int k,
                               const SplitSpec& spec);

/// Majority vote among the k nearest training columns under Euclidean
/// distance. Distance ties go to the lower training index; vote ties go to
/// the smallest class index. k_neighbors larger than the training set is
/// clamped with a warning.
std::vector<int> knn_classify(const Matrix& train_x,
                              const std::vector<int>& train_labels,
                              const Matrix& test_x, int k_neighbors);

/// Macro-averaged one-vs-rest sensitivity and specificity of a k x k count
/// matrix (rows = actual, cols = predicted). Classes without a true sample
/// are excluded from both averages.
std::pair<double, double> sensitivity_specificity(const Matrix& confusion);

/// KNN sweep over feature-set sizes. For each m the features ranking[0..m)
/// are kept (as a set; the subset is canonicalized by ascending index) and
/// n_trials random splits are classified. normalize z-scores each feature
/// with statistics of the training split only.
EvalReport evaluate_ranking(const Dataset& dataset,
                            const std::vector<int>& ranking,
                            const std::vector<int>& sizes,
                            const SplitSpec& split, int k_neighbors = 5,
                            bool normalize = false);

}  // namespace fsor
