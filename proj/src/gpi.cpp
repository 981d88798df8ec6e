#include "fsor/gpi.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace fsor {

namespace {

constexpr double kDegenerateSv = 1e-12;

Vector seeded_unit_vector(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = gauss(rng);
  const double nrm = v.norm();
  if (nrm == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / nrm;
}

void check_config(const GpiConfig& cfg) {
  if (!(cfg.alpha_safety > 1.0))
    throw std::invalid_argument("gpi: alpha_safety must exceed 1");
  if (cfg.max_iter < 1) throw std::invalid_argument("gpi: max_iter must be >= 1");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("gpi: tol must be positive");
}

// Fill the columns of q flagged false in `keep` with unit vectors orthogonal
// to every retained/previously completed column. Candidates are the
// canonical basis vectors tried in index order; two Gram-Schmidt passes keep
// the result orthonormal to working precision.
void complete_columns(Matrix& q, const std::vector<bool>& keep) {
  const Eigen::Index rows = q.rows(), cols = q.cols();
  const double thresh = 0.5 / std::sqrt(static_cast<double>(rows));
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (keep[static_cast<std::size_t>(j)]) continue;
    bool placed = false;
    for (Eigen::Index cand = 0; cand < rows && !placed; ++cand) {
      Vector r = Vector::Unit(rows, cand);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index jj = 0; jj < cols; ++jj) {
          if (jj == j) continue;
          if (!keep[static_cast<std::size_t>(jj)] && jj > j) continue;
          r -= q.col(jj).dot(r) * q.col(jj);
        }
      }
      const double nrm = r.norm();
      if (nrm > thresh) {
        q.col(j) = r / nrm;
        placed = true;
      }
    }
    if (!placed)
      throw std::runtime_error("polar_factor: basis completion failed");
  }
}

using ApplyA = std::function<Matrix(const Matrix&)>;

GpiSolution iterate(Eigen::Index d, Eigen::Index k, const Matrix& b,
                    double alpha, const ApplyA& apply_a, const GpiConfig& cfg,
                    const std::optional<Matrix>& w0) {
  Matrix w;
  if (w0.has_value()) {
    if (w0->rows() != d || w0->cols() != k)
      throw std::invalid_argument("gpi: w0 has wrong shape");
    const double ortho =
        (w0->transpose() * (*w0) - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
    if (ortho >= 1e-6)
      throw std::invalid_argument("gpi: w0 is not orthonormal");
    w = *w0;
  } else {
    w = random_orthonormal(d, k, cfg.seed);
  }

  GpiSolution out;
  Matrix aw = apply_a(w);
  double f = w.cwiseProduct(aw).sum() - 2.0 * w.cwiseProduct(b).sum();
  out.objective_trace.push_back(f);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    Matrix m = 2.0 * (alpha * w - aw + b);
    w = polar_factor(m);
    aw = apply_a(w);
    const double fn = w.cwiseProduct(aw).sum() - 2.0 * w.cwiseProduct(b).sum();
    out.objective_trace.push_back(fn);
    out.iterations = it;
    if (std::abs(fn - f) < cfg.tol * std::max(1.0, std::abs(f))) {
      out.converged = true;
      f = fn;
      break;
    }
    f = fn;
  }
  out.w = std::move(w);
  return out;
}

}  // namespace

QpsmProblem::QpsmProblem(Matrix a_in, Matrix b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("QpsmProblem: A must be square");
  if (b.rows() != a.rows())
    throw std::invalid_argument("QpsmProblem: B row count must match A");
  if (b.cols() > a.rows())
    throw std::invalid_argument("QpsmProblem: needs k <= d");
  if (!a.allFinite() || !b.allFinite())
    throw std::invalid_argument("QpsmProblem: non-finite entries");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() >= 1e-10 * scale)
    throw std::invalid_argument("QpsmProblem: A is not symmetric");
  a = 0.5 * (a + a.transpose().eval());
}

double choose_alpha(const Matrix& a, double alpha_safety) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw std::invalid_argument("choose_alpha: A must be square and nonempty");
  if (!a.allFinite())
    throw std::invalid_argument("choose_alpha: non-finite entries");
  if (!(alpha_safety > 1.0))
    throw std::invalid_argument("choose_alpha: alpha_safety must exceed 1");

  const Eigen::Index d = a.rows();
  // work on the trace-centered matrix; a spectral shift of A then moves the
  // result by exactly the same amount
  const double mean_eig = a.trace() / static_cast<double>(d);
  Matrix a0 = a - mean_eig * Matrix::Identity(d, d);
  a0 = 0.5 * (a0 + a0.transpose().eval());
  const double radius = a0.cwiseAbs().rowwise().sum().maxCoeff();
  if (radius == 0.0) return mean_eig + 1e-6;

  Vector v = seeded_unit_vector(d, 0x51efa9ULL);
  double lam = v.dot(a0 * v);
  for (int t = 0; t < 120; ++t) {
    Vector w = a0 * v + radius * v;  // Gershgorin shift keeps the operator PSD
    const double nw = w.norm();
    if (nw < 1e-300) {
      v = seeded_unit_vector(d, 0x51efa9ULL + static_cast<std::uint64_t>(t) + 1);
      continue;
    }
    v = w / nw;
    lam = v.dot(a0 * v);
  }

  const double margin =
      (alpha_safety - 1.0) * std::max(std::abs(lam), 1e-3 * radius) +
      1e-12 * radius;
  double alpha0 = lam + margin;
  // verified positive definite; on failure step toward the Gershgorin bound,
  // which dominates every eigenvalue of a0
  const double upper = radius * (1.0 + 1e-8);
  for (int tries = 0; tries < 128; ++tries) {
    Eigen::LLT<Matrix> llt(alpha0 * Matrix::Identity(d, d) - a0);
    if (llt.info() == Eigen::Success) break;
    if (alpha0 >= upper) {
      alpha0 = upper * (1.0 + 1e-8) + 1e-12;
      break;
    }
    alpha0 = 0.5 * (alpha0 + upper);
  }
  return mean_eig + alpha0;
}

Matrix polar_factor(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  Matrix u = svd.matrixU();
  Matrix v = svd.matrixV();
  std::vector<bool> keep(static_cast<std::size_t>(sv.size()), true);
  bool degenerate = false;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < kDegenerateSv) {
      keep[static_cast<std::size_t>(i)] = false;
      degenerate = true;
    }
  }
  if (degenerate) {
    complete_columns(u, keep);
    complete_columns(v, keep);
  }
  return u * v.transpose();
}

Matrix random_orthonormal(Eigen::Index d, Eigen::Index k, std::uint64_t seed) {
  if (d < 1 || k < 1 || k > d)
    throw std::invalid_argument("random_orthonormal: needs 1 <= k <= d");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(d, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(d, k);
}

GpiSolution gpi_solve(const QpsmProblem& problem, const GpiConfig& config,
                      const std::optional<Matrix>& w0) {
  check_config(config);
  const double alpha = choose_alpha(problem.a, config.alpha_safety);
  const Matrix& a = problem.a;
  return iterate(
      a.rows(), problem.b.cols(), problem.b, alpha,
      [&a](const Matrix& w) -> Matrix { return a * w; }, config, w0);
}

GpiSolution gpi_solve_gram(const Matrix& c, const Matrix& b,
                           const GpiConfig& config,
                           const std::optional<Matrix>& w0) {
  check_config(config);
  if (b.rows() != c.rows())
    throw std::invalid_argument("gpi_solve_gram: B row count must match C");
  if (b.cols() > c.rows())
    throw std::invalid_argument("gpi_solve_gram: needs k <= d");
  if (!c.allFinite() || !b.allFinite())
    throw std::invalid_argument("gpi_solve_gram: non-finite entries");

  // C C^T w accumulated over column panels sized to stay cache-resident,
  // so C streams once per application instead of twice
  const Eigen::Index d = c.rows();
  const Eigen::Index panel =
      std::max<Eigen::Index>(8, (256 * 1024) / (8 * std::max<Eigen::Index>(d, 1)));
  const auto apply = [&c, panel](const Matrix& w) -> Matrix {
    Matrix out = Matrix::Zero(w.rows(), w.cols());
    for (Eigen::Index j0 = 0; j0 < c.cols(); j0 += panel) {
      const Eigen::Index bs = std::min(panel, c.cols() - j0);
      const auto cols = c.middleCols(j0, bs);
      out.noalias() += cols * (cols.transpose() * w);
    }
    return out;
  };

  // lambda_max(C C^T) by power iteration; PSD, so the Rayleigh quotient
  // v.(CC^T v) converges from below and needs no shift. Stops once the
  // estimate stalls at 1e-4 relative; the safety factor covers the rest.
  Vector v = seeded_unit_vector(d, 0x6ca11ULL);
  double lam = 0.0;
  for (int t = 0; t < 60; ++t) {
    const Vector u = apply(v);
    const double ray = v.dot(u);
    const double nu = u.norm();
    const bool settled =
        t >= 11 && std::abs(ray - lam) <= 1e-4 * std::max(1.0, lam);
    lam = std::max(ray, 0.0);
    if (nu < 1e-300) break;
    v = u / nu;
    if (settled) break;
  }
  const double alpha =
      config.alpha_safety * lam + 1e-9 * std::max(1.0, lam);
  return iterate(d, b.cols(), b, alpha, apply, config, w0);
}

}  // namespace fsor
