#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace fsor {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Malformed input data (files, rankings, dataset contents). The CLI maps
/// this to exit code 3; bad configuration throws std::invalid_argument and
/// maps to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Indices 0..d-1 ordered by descending score, ties broken by ascending index.
std::vector<int> descending_ranking(const Vector& scores);

/// True when `ranking` is a permutation of 0..d-1.
bool is_permutation(const std::vector<int>& ranking, Eigen::Index d);

}  // namespace fsor
