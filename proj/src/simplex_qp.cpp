#include "fsor/simplex_qp.hpp"

#include <cmath>
#include <limits>

namespace fsor {

namespace {

void check_config(const AlmConfig& cfg) {
  if (!(cfg.rho > 1.0) || !(cfg.rho <= 2.0))
    throw std::invalid_argument("alm: rho must lie in (1, 2]");
  if (!(cfg.mu0 > 0.0)) throw std::invalid_argument("alm: mu0 must be positive");
  if (cfg.max_iter < 1) throw std::invalid_argument("alm: max_iter must be >= 1");
  if (!(cfg.feas_tol > 0.0))
    throw std::invalid_argument("alm: feas_tol must be positive");
  if (cfg.stall_tol < 0.0)
    throw std::invalid_argument("alm: stall_tol must be nonnegative");
}

// LDL^T solve of the SPD tridiagonal system (T + mu I) x = rhs, where T has
// main diagonal `diag` and subdiagonal `sub`. O(d).
void tridiag_solve(const Vector& diag, const Vector& sub, double mu,
                   const Vector& rhs, Vector& piv, Vector& low, Vector& x) {
  const Eigen::Index d = diag.size();
  piv(0) = diag(0) + mu;
  for (Eigen::Index i = 1; i < d; ++i) {
    low(i) = sub(i - 1) / piv(i - 1);
    piv(i) = diag(i) + mu - low(i) * sub(i - 1);
  }
  x(0) = rhs(0);
  for (Eigen::Index i = 1; i < d; ++i) x(i) = rhs(i) - low(i) * x(i - 1);
  x(d - 1) /= piv(d - 1);
  for (Eigen::Index i = d - 2; i >= 0; --i)
    x(i) = x(i) / piv(i) - low(i + 1) * x(i + 1);
}

// All LDL^T pivots of (T + shift I) positive, i.e. lambda_min(T) > -shift.
bool tridiag_pd(const Vector& diag, const Vector& sub, double shift) {
  const Eigen::Index d = diag.size();
  double piv = diag(0) + shift;
  if (!(piv > 0.0)) return false;
  for (Eigen::Index i = 1; i < d; ++i) {
    piv = diag(i) + shift - sub(i - 1) * sub(i - 1) / piv;
    if (!(piv > 0.0)) return false;
  }
  return true;
}

}  // namespace

SimplexQp::SimplexQp(Matrix a_in, Vector b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("SimplexQp: A must be square");
  if (b.size() != a.rows())
    throw std::invalid_argument("SimplexQp: b length must match A");
  if (!a.allFinite() || !b.allFinite())
    throw std::invalid_argument("SimplexQp: non-finite entries");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() >= 1e-10 * scale)
    throw std::invalid_argument("SimplexQp: A is not symmetric");
  a = 0.5 * (a + a.transpose().eval());
}

double hadamard_quadratic(const Vector& s, const Matrix& a, const Matrix& b) {
  const Eigen::Index d = s.size();
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != d ||
      b.rows() != d)
    throw std::invalid_argument("hadamard_quadratic: dimension mismatch");
  // (A^T o B)_{ij} = A_{ji} B_{ij}
  double acc = 0.0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i)
      acc += s(i) * a(j, i) * b(i, j) * s(j);
  return acc;
}

Vector alm_theta_step(const AlmState& state, const SimplexQp& qp) {
  const Eigen::Index d = qp.a.rows();
  if (state.theta.size() != d || state.v.size() != d ||
      state.lambda1.size() != d)
    throw std::invalid_argument("alm_theta_step: state size mismatch");
  if (!(state.mu > 0.0))
    throw std::invalid_argument("alm_theta_step: mu must be positive");
  Matrix e = 2.0 * qp.a + state.mu * Matrix::Identity(d, d) +
             state.mu * Matrix::Ones(d, d);
  Vector f = state.mu * state.v +
             (state.mu - state.lambda2) * Vector::Ones(d) - state.lambda1 +
             qp.b;
  Eigen::LLT<Matrix> llt(e);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(
        "alm_theta_step: E factorization failed; A must be positive "
        "semidefinite");
  return llt.solve(f);
}

Vector alm_v_step(const Vector& theta, const Vector& lambda1, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("alm_v_step: mu must be positive");
  if (theta.size() != lambda1.size())
    throw std::invalid_argument("alm_v_step: size mismatch");
  return (theta + lambda1 / mu).cwiseMax(0.0);
}

AlmResult alm_solve(const SimplexQp& qp, const AlmConfig& config,
                    const std::optional<Vector>& theta0) {
  check_config(config);
  const Eigen::Index d = qp.a.rows();

  // Normalize the objective so the mu schedule is meaningful regardless of
  // the data magnitude; the minimizer is unchanged, the reported objective
  // is rescaled back.
  const double scale =
      std::max({1.0, qp.a.cwiseAbs().maxCoeff(), qp.b.cwiseAbs().maxCoeff()});
  const Matrix a2 = (2.0 / scale) * qp.a;
  const Vector bs = qp.b / scale;

  // One tridiagonalization 2A/s = Q T Q^T per solve; every E-solve then
  // costs two dense mat-vecs plus O(d) tridiagonal work (Sherman-Morrison
  // handles the rank-one mu 1 1^T term).
  Vector tdiag(d), tsub(std::max<Eigen::Index>(d - 1, 0));
  Matrix q;
  if (d == 1) {
    tdiag(0) = a2(0, 0);
    q = Matrix::Identity(1, 1);
  } else {
    Eigen::Tridiagonalization<Matrix> tri(a2);
    tdiag = tri.diagonal();
    tsub = tri.subDiagonal();
    q = tri.matrixQ();
  }

  // PSD gate: lambda_min(A) >= -max(1e-8, 1e-12 lambda_max(A)), evaluated
  // on T by counting LDL^T pivots. Gershgorin bounds lambda_max(T).
  double gersh = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    double row = tdiag(i);
    if (i > 0) row += std::abs(tsub(i - 1));
    if (i + 1 < d) row += std::abs(tsub(i));
    gersh = std::max(gersh, row);
  }
  const double psd_shift =
      std::max(2e-8 / scale, 1e-12 * std::max(0.0, gersh));
  if (!tridiag_pd(tdiag, tsub, psd_shift))
    throw std::invalid_argument("alm_solve: A is not positive semidefinite");

  const Vector ones = Vector::Ones(d);
  const Vector q_ones = q.transpose() * ones;

  Vector theta = Vector::Constant(d, 1.0 / static_cast<double>(d));
  if (theta0.has_value()) {
    if (theta0->size() != d)
      throw std::invalid_argument("alm_solve: theta0 size mismatch");
    if (!theta0->allFinite())
      throw std::invalid_argument("alm_solve: theta0 has non-finite entries");
    theta = *theta0;
  }
  Vector v = theta;
  Vector l1 = Vector::Zero(d);
  double l2 = 0.0;
  double mu = config.mu0;

  AlmResult res;
  double best_feas = std::numeric_limits<double>::infinity();
  Vector best_theta = theta;
  Vector prev = theta;
  Vector f(d), fhat(d), yhat(d), zhat(d), that(d), piv(d), low(d);

  for (int it = 1; it <= config.max_iter; ++it) {
    f = mu * v + (mu - l2) * ones - l1 + bs;
    fhat.noalias() = q.transpose() * f;
    tridiag_solve(tdiag, tsub, mu, fhat, piv, low, yhat);
    tridiag_solve(tdiag, tsub, mu, q_ones, piv, low, zhat);
    const double corr =
        mu * q_ones.dot(yhat) / (1.0 + mu * q_ones.dot(zhat));
    that = yhat - corr * zhat;
    theta.noalias() = q * that;

    v = (theta + l1 / mu).cwiseMax(0.0);
    l1 += mu * (theta - v);
    l2 += mu * (theta.sum() - 1.0);

    const double feas = std::max((theta - v).lpNorm<Eigen::Infinity>(),
                                 std::abs(theta.sum() - 1.0));
    res.feasibility_trace.push_back(feas);
    // theta' A theta in the tridiagonal basis costs O(d)
    double quad = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) quad += tdiag(i) * that(i) * that(i);
    for (Eigen::Index i = 0; i + 1 < d; ++i)
      quad += 2.0 * tsub(i) * that(i) * that(i + 1);
    res.objective_trace.push_back(scale * (0.5 * quad - theta.dot(bs)));
    res.iterations = it;

    if (feas < best_feas) {
      best_feas = feas;
      best_theta = theta;
    }
    if (feas < config.feas_tol) {
      res.converged = true;
      break;
    }
    if (it > 1 && (theta - prev).lpNorm<Eigen::Infinity>() < config.stall_tol)
      break;
    prev = theta;
    mu *= config.rho;
  }

  // exact simplex point for downstream ranking
  Vector th = res.converged ? theta : best_theta;
  th = th.cwiseMax(0.0);
  const double total = th.sum();
  res.theta = total > 0.0
                  ? Vector(th / total)
                  : Vector(Vector::Constant(d, 1.0 / static_cast<double>(d)));
  return res;
}

}  // namespace fsor
