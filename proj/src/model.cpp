#include "fsor/model.hpp"

#include "fsor/logging.hpp"

#include <cmath>

namespace fsor {

namespace {

void check_shapes(const Matrix& x, const Matrix& y, const Matrix& w,
                  const Vector& theta) {
  if (w.rows() != x.rows())
    throw std::invalid_argument("objective: W row count must match X");
  if (theta.size() != x.rows())
    throw std::invalid_argument("objective: theta length must match X rows");
  if (y.cols() != x.cols())
    throw std::invalid_argument("objective: Y column count must match X");
  if (w.cols() != y.rows())
    throw std::invalid_argument("objective: W column count must match Y rows");
}

}  // namespace

double objective(const Matrix& x, const Matrix& y_onehot, const Matrix& w,
                 const Vector& theta, bool centered) {
  check_shapes(x, y_onehot, w, theta);
  if (centered) {
    const Matrix xc = center_rows(x);
    const Matrix yc = center_rows(y_onehot);
    return (w.transpose() * (theta.asDiagonal() * xc) - yc).squaredNorm();
  }
  const Vector b = compute_bias(x, y_onehot, w, theta);
  Matrix r = w.transpose() * (theta.asDiagonal() * x) - y_onehot;
  r.colwise() += b;
  return r.squaredNorm();
}

Vector compute_bias(const Matrix& x, const Matrix& y_onehot, const Matrix& w,
                    const Vector& theta) {
  check_shapes(x, y_onehot, w, theta);
  const double n = static_cast<double>(x.cols());
  const Vector xsum = x.rowwise().sum();
  return (y_onehot.rowwise().sum() -
          w.transpose() * theta.cwiseProduct(xsum)) /
         n;
}

FsorResult fit(const Dataset& dataset, const FsorConfig& config) {
  if (config.outer_max_iter < 1)
    throw std::invalid_argument("fit: outer_max_iter must be >= 1");
  if (config.outer_tol < 0.0)
    throw std::invalid_argument("fit: outer_tol must be nonnegative");
  dataset.validate();

  const Eigen::Index d = dataset.d();
  const int k = dataset.k();
  if (k > d)
    throw std::invalid_argument(
        "fit: orthonormality W^T W = I_k needs k <= d (k=" +
        std::to_string(k) + ", d=" + std::to_string(d) + ")");

  const Matrix& x = dataset.features;
  const Matrix y = one_hot(dataset.labels, k).values;
  const Matrix xc = center_rows(x);
  const Matrix yc = center_rows(y);

  // constants across the outer loop
  Matrix gram = Matrix::Zero(d, d);  // X H X^T
  gram.selfadjointView<Eigen::Lower>().rankUpdate(xc);
  gram = gram.selfadjointView<Eigen::Lower>();
  const Matrix cross = xc * y.transpose();  // X H Y^T
  const double yc_sq = yc.squaredNorm();

  for (Eigen::Index i = 0; i < d; ++i) {
    if (gram(i, i) <= 1e-18 * std::max(1.0, gram.diagonal().maxCoeff())) {
      logging::warn("fit: feature " + std::to_string(i) +
                    " has zero variance; its weight is determined by the "
                    "simplex constraint alone");
    }
  }

  GpiConfig gpi_cfg = config.gpi;
  gpi_cfg.seed = config.seed;

  Vector theta = Vector::Constant(d, 1.0 / static_cast<double>(d));
  Matrix w;
  bool have_w = false;

  FsorResult out;
  for (int it = 1; it <= config.outer_max_iter; ++it) {
    // W-step: A = (Theta X H)(Theta X H)^T kept in factored form, so the
    // solve costs O(d n k) per inner iteration instead of O(d^2 n) setup
    const Matrix cmat = theta.asDiagonal() * xc;
    const Matrix bmat = theta.asDiagonal() * cross;
    GpiSolution gs = gpi_solve_gram(
        cmat, bmat, gpi_cfg,
        have_w ? std::optional<Matrix>(w) : std::optional<Matrix>());
    w = gs.w;
    have_w = true;

    // theta-step: A = (X H X^T) o (W W^T), b = diag(2 X H Y^T W^T)
    Matrix wwt = Matrix::Zero(d, d);
    wwt.selfadjointView<Eigen::Lower>().rankUpdate(w);
    wwt = wwt.selfadjointView<Eigen::Lower>();
    const Vector balm = 2.0 * cross.cwiseProduct(w).rowwise().sum();
    AlmResult ar =
        alm_solve(SimplexQp(gram.cwiseProduct(wwt), balm), config.alm, theta);
    theta = ar.theta;

    // centered objective via the cached Gram pieces:
    // ||W^T Theta X H - Y H||^2 = Tr((TW)^T G TW) - 2 <cross, TW> + ||Y H||^2
    const Matrix tw = theta.asDiagonal() * w;
    const double obj = (tw.transpose() * (gram * tw)).trace() -
                       2.0 * cross.cwiseProduct(tw).sum() + yc_sq;
    out.objective_trace.push_back(obj);
    out.iterations = it;

    if (it >= 2) {
      const double denom =
          std::max(std::abs(out.objective_trace.front()), 1e-300);
      if (std::abs(out.objective_trace[static_cast<std::size_t>(it - 2)] -
                   obj) < config.outer_tol * denom) {
        out.converged = true;
        break;
      }
    }
  }

  out.w = std::move(w);
  out.theta = std::move(theta);
  out.bias = compute_bias(x, y, out.w, out.theta);
  out.ranking = descending_ranking(out.theta);
  return out;
}

std::vector<int> rank_features(const FsorResult& result) {
  return descending_ranking(result.theta);
}

}  // namespace fsor
