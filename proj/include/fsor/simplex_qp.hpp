#pragma once

#include "fsor/common.hpp"

#include <optional>

namespace fsor {

/// min_theta theta^T A theta - theta^T b  s.t. theta^T 1 = 1, theta >= 0,
/// with A symmetric positive semidefinite. A is symmetrized by averaging.
struct SimplexQp {
  Matrix a;
  Vector b;

  SimplexQp(Matrix a_in, Vector b_in);
};

/// Augmented-Lagrangian iterate: primal theta, split variable v >= 0,
/// multipliers lambda1 (for theta = v) and lambda2 (for theta^T 1 = 1),
/// penalty mu grown by rho each iteration.
struct AlmState {
  Vector theta;
  Vector v;
  Vector lambda1;
  double lambda2 = 0.0;
  double mu = 1.0;
  double rho = 1.05;
};

struct AlmConfig {
  double rho = 1.05;       // in (1, 2]
  double mu0 = 1.0;
  int max_iter = 1000;
  double feas_tol = 1e-8;  // max of ||theta - v||_inf and |theta^T 1 - 1|
  double stall_tol = 1e-12;  // inf-norm change of theta between iterations
};

struct AlmResult {
  Vector theta;  // on the simplex exactly (clamped and renormalized)
  std::vector<double> feasibility_trace;
  std::vector<double> objective_trace;  // theta^T A theta - theta^T b
  int iterations = 0;
  bool converged = false;
};

/// Tr(S A S B) for diagonal S = diag(s), evaluated as s^T (A^T o B) s.
double hadamard_quadratic(const Vector& s, const Matrix& a, const Matrix& b);

/// One primal update: solves E theta = f with E = 2A + mu I + mu 1 1^T and
/// f = mu v + mu 1 - lambda2 1 - lambda1 + b via an SPD factorization.
Vector alm_theta_step(const AlmState& state, const SimplexQp& qp);

/// One split-variable update: max(0, theta + lambda1 / mu) elementwise.
Vector alm_v_step(const Vector& theta, const Vector& lambda1, double mu);

/// Full multiplier loop. theta0 defaults to the uniform vector. The returned
/// theta is projected onto the simplex exactly; converged is false when the
/// feasibility tolerance was not reached (best iterate returned).
AlmResult alm_solve(const SimplexQp& qp, const AlmConfig& config = {},
                    const std::optional<Vector>& theta0 = {});

}  // namespace fsor
