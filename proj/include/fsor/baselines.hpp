#pragma once

#include "fsor/common.hpp"
#include "fsor/dataset.hpp"

#include <string>

namespace fsor {

struct FeatureScores {
  Vector scores;            // length d, finite
  std::string method_name;  // "fisher" or "cc"
  std::vector<int> ranking;  // descending score, index tie-break
};

/// Classical Fisher ratio per feature,
/// F_j = sum_c n_c (mu_cj - mu_j)^2 / sum_c n_c var_cj,
/// with population (biased) class variances. A zero denominator scores the
/// cap 1e12 when the numerator is positive and 0 otherwise.
FeatureScores fisher_score(const Dataset& dataset);

/// Max over classes of the absolute point-biserial correlation between the
/// feature and the one-vs-rest class indicator. Degenerate terms (zero
/// variance on either side) contribute 0. Requires n >= 3.
FeatureScores correlation_score(const Dataset& dataset);

}  // namespace fsor
