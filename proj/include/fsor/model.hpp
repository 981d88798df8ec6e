#pragma once

#include "fsor/common.hpp"
#include "fsor/dataset.hpp"
#include "fsor/gpi.hpp"
#include "fsor/simplex_qp.hpp"

#include <cstdint>

namespace fsor {

struct FsorConfig {
  int outer_max_iter = 100;
  // relative change of the centered objective against its first recorded
  // value; 0 disables early stopping (used for fixed-length traces)
  double outer_tol = 1e-6;
  std::uint64_t seed = 0;
  GpiConfig gpi;
  AlmConfig alm;

  FsorConfig() {
    // per-outer-iteration budgets; warm starts carry progress across calls
    gpi.max_iter = 50;
    alm.max_iter = 200;
  }
};

struct FsorResult {
  Matrix w;       // d x k, orthonormal columns
  Vector theta;   // length d, on the simplex exactly
  Vector bias;    // length k
  std::vector<double> objective_trace;  // centered objective per outer iter
  std::vector<int> ranking;             // features by descending theta
  int iterations = 0;
  bool converged = false;
};

/// Residual ||W^T diag(theta) X H - Y H||_F^2 when centered, where H is
/// applied by subtracting row means (H is never materialized). When
/// centered is false, evaluates ||W^T diag(theta) X + b 1^T - Y||_F^2 with
/// the closed-form optimal bias; both forms agree at the optimal bias.
double objective(const Matrix& x, const Matrix& y_onehot, const Matrix& w,
                 const Vector& theta, bool centered);

/// Closed-form bias b = (1/n)(Y 1 - W^T diag(theta) X 1).
Vector compute_bias(const Matrix& x, const Matrix& y_onehot, const Matrix& w,
                    const Vector& theta);

/// Alternating minimization: a Stiefel-constrained regression step for W
/// and a simplex-constrained quadratic step for theta, both warm-started
/// from the previous outer iterate. Requires k <= d.
FsorResult fit(const Dataset& dataset, const FsorConfig& config = {});

/// Feature indices by descending weight, ties broken by ascending index.
std::vector<int> rank_features(const FsorResult& result);

}  // namespace fsor
