#pragma once

#include "fsor/common.hpp"

#include <cstdint>
#include <optional>

namespace fsor {

/// min_{W^T W = I_k} Tr(W^T A W - 2 W^T B) with A symmetric d x d, B d x k.
/// A is symmetrized by averaging at construction.
struct QpsmProblem {
  Matrix a;
  Matrix b;

  QpsmProblem(Matrix a_in, Matrix b_in);
};

struct GpiConfig {
  double alpha_safety = 1.01;  // multiplicative margin above lambda_max(A)
  int max_iter = 500;
  double tol = 1e-8;  // relative objective change
  std::uint64_t seed = 0;  // initial W when no warm start is given
};

struct GpiSolution {
  Matrix w;  // d x k, orthonormal columns
  std::vector<double> objective_trace;  // f(W) per iterate, entry 0 = f(W0)
  int iterations = 0;
  bool converged = false;
};

/// A shift value making alpha*I - A positive definite, estimated by power
/// iteration on a Gershgorin-shifted copy of A. Equivariant under
/// A -> A + c*I (the estimate is built from the trace-centered matrix), so
/// the GPI trajectory does not depend on spectral shifts of A.
double choose_alpha(const Matrix& a, double alpha_safety = 1.01);

/// Nearest matrix with orthonormal columns (U V^T from the thin SVD).
/// Singular directions below 1e-12 are replaced by a deterministic
/// Gram-Schmidt completion so rank-deficient inputs resolve reproducibly.
Matrix polar_factor(const Matrix& m);

/// Q factor of a seeded Gaussian d x k matrix.
Matrix random_orthonormal(Eigen::Index d, Eigen::Index k, std::uint64_t seed);

/// Fixed-point iteration W <- polar(2(alpha*I - A)W + 2B). The objective
/// trace is non-increasing; stops on relative objective stall.
GpiSolution gpi_solve(const QpsmProblem& problem, const GpiConfig& config = {},
                      const std::optional<Matrix>& w0 = {});

/// Same iteration with A given in factored form A = C C^T (C is d x m).
/// A is never materialized, so the per-iteration cost stays O(d m k).
GpiSolution gpi_solve_gram(const Matrix& c, const Matrix& b,
                           const GpiConfig& config = {},
                           const std::optional<Matrix>& w0 = {});

}  // namespace fsor
