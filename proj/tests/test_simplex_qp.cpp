#include "fsor/simplex_qp.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace fsor;

TEST_CASE("hadamard quadratic reduces to Tr(AB) for s = 1") {
  const Matrix a = oracles::random_matrix(3, 3, 1);
  const Matrix b = oracles::random_matrix(3, 3, 2);
  const double got = hadamard_quadratic(Vector::Ones(3), a, b);
  CHECK(got == doctest::Approx((a * b).trace()).epsilon(1e-12));
}

TEST_CASE("hadamard quadratic picks a single entry for s = e1") {
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 5, 6, 7, 8;
  CHECK(hadamard_quadratic(Vector{{1.0, 0.0}}, a, b) == doctest::Approx(5.0));
}

TEST_CASE("hadamard quadratic equals Tr(SASB) on random input") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(s % 7);
    const Matrix a = oracles::random_matrix(d, d, 10 + s);
    const Matrix b = oracles::random_matrix(d, d, 40 + s);
    const Vector sv = oracles::random_matrix(d, 1, 70 + s).col(0);
    const Matrix sd = sv.asDiagonal();
    const double direct = (sd * a * sd * b).trace();
    CHECK(std::abs(hadamard_quadratic(sv, a, b) - direct) < 1e-10);
  }
  CHECK_THROWS_AS(
      hadamard_quadratic(Vector::Ones(2), Matrix::Zero(3, 3), Matrix::Zero(3, 3)),
      std::invalid_argument);
}

TEST_CASE("alm theta step solves the hand-checkable 2x2 system") {
  AlmState st;
  st.theta = Vector::Constant(2, 0.5);
  st.v = Vector::Constant(2, 0.5);
  st.lambda1 = Vector::Zero(2);
  st.lambda2 = 0.0;
  st.mu = 1.0;
  const SimplexQp qp(Matrix::Zero(2, 2), Vector::Zero(2));
  const Vector theta = alm_theta_step(st, qp);
  CHECK(theta(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(theta(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("alm theta step lands on the simplex for A = 0, b = 0") {
  for (Eigen::Index d : {2, 3, 7}) {
    AlmState st;
    st.theta = Vector::Constant(d, 1.0 / static_cast<double>(d));
    st.v = oracles::random_matrix(d, 1, 5 + static_cast<std::uint64_t>(d))
               .col(0)
               .cwiseAbs();
    st.v /= st.v.sum();  // v on the simplex
    st.lambda1 = Vector::Zero(d);
    st.mu = 1.7;
    const SimplexQp qp(Matrix::Zero(d, d), Vector::Zero(d));
    const Vector theta = alm_theta_step(st, qp);
    CHECK(std::abs(theta.sum() - 1.0) < 1e-12);
  }
}

TEST_CASE("alm theta step satisfies its linear system to high precision") {
  const Eigen::Index d = 6;
  AlmState st;
  st.theta = Vector::Constant(d, 1.0 / 6.0);
  st.v = oracles::random_matrix(d, 1, 21).col(0).cwiseAbs();
  st.lambda1 = oracles::random_matrix(d, 1, 22).col(0);
  st.lambda2 = 0.4;
  st.mu = 2.5;
  const Matrix a = oracles::random_spd(d, 23);
  const Vector b = oracles::random_matrix(d, 1, 24).col(0);
  const SimplexQp qp(a, b);
  const Vector theta = alm_theta_step(st, qp);

  const Matrix e = 2.0 * qp.a + st.mu * Matrix::Identity(d, d) +
                   st.mu * Matrix::Ones(d, d);
  const Vector f = st.mu * st.v + (st.mu - st.lambda2) * Vector::Ones(d) -
                   st.lambda1 + qp.b;
  CHECK((e * theta - f).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("alm v step clamps negatives") {
  CHECK(alm_v_step(Vector{{0.5, -0.2}}, Vector::Zero(2), 1.0)
            .isApprox(Vector{{0.5, 0.0}}));
  CHECK(alm_v_step(Vector{{0.3, 0.7}}, Vector::Zero(2), 1.0)
            .isApprox(Vector{{0.3, 0.7}}));
  const Vector v = alm_v_step(Vector{{-1.0, 2.0}}, Vector{{2.0, -4.0}}, 2.0);
  CHECK(v.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(alm_v_step(Vector::Zero(2), Vector::Zero(2), 0.0),
                  std::invalid_argument);
}

TEST_CASE("alm solves symmetric and vertex problems") {
  const AlmResult uniform = alm_solve(SimplexQp(Matrix::Identity(3, 3), Vector::Zero(3)));
  CHECK(uniform.converged);
  CHECK((uniform.theta - Vector::Constant(3, 1.0 / 3.0)).cwiseAbs().maxCoeff() <
        1e-8);

  const AlmResult vertex =
      alm_solve(SimplexQp(Matrix::Zero(3, 3), Vector{{0.0, 1.0, 0.0}}));
  CHECK(vertex.converged);
  CHECK((vertex.theta - Vector{{0.0, 1.0, 0.0}}).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("alm matches the active-set oracle on a d=4 problem") {
  const Matrix a = oracles::random_spd(4, 77);
  const Vector b = oracles::random_matrix(4, 1, 78).col(0);
  const AlmResult res = alm_solve(SimplexQp(a, b));
  const auto oracle = oracles::simplex_qp_min(a, b);
  CHECK((res.theta - oracle.theta).lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_CASE("alm final iterates are exactly feasible") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(s % 5);
    const Matrix a = oracles::random_spd(d, 200 + s);
    const Vector b = oracles::random_matrix(d, 1, 300 + s).col(0);
    const AlmResult res = alm_solve(SimplexQp(a, b));
    CHECK(res.converged);
    CHECK(std::abs(res.theta.sum() - 1.0) < 1e-12);
    CHECK(res.theta.minCoeff() >= 0.0);
  }
}

TEST_CASE("alm constraint violation shrinks along the trace") {
  const Matrix a = oracles::random_spd(5, 401);
  const Vector b = oracles::random_matrix(5, 1, 402).col(0);
  const AlmResult res = alm_solve(SimplexQp(a, b));
  const auto& tr = res.feasibility_trace;
  REQUIRE(tr.size() >= 2);
  const std::size_t last = tr.size() - 1;
  const std::size_t earlier = last >= 20 ? last - 20 : 0;
  CHECK(tr[last] < tr[earlier]);
}

TEST_CASE("alm is permutation equivariant") {
  const Matrix a = oracles::random_spd(4, 501);
  const Vector b = oracles::random_matrix(4, 1, 502).col(0);
  const Vector theta = alm_solve(SimplexQp(a, b)).theta;

  const std::vector<int> perm{2, 0, 3, 1};
  Matrix pa(4, 4);
  Vector pb(4);
  for (int i = 0; i < 4; ++i) {
    pb(i) = b(perm[static_cast<std::size_t>(i)]);
    for (int j = 0; j < 4; ++j)
      pa(i, j) = a(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  const Vector ptheta = alm_solve(SimplexQp(pa, pb)).theta;
  for (int i = 0; i < 4; ++i)
    CHECK(ptheta(i) ==
          doctest::Approx(theta(perm[static_cast<std::size_t>(i)])).epsilon(1e-9));
}

TEST_CASE("alm internal solver agrees with the one-step operations") {
  // entries kept below 1 so the solver's internal scale factor is exactly 1
  const Eigen::Index d = 5;
  Matrix a = oracles::random_spd(d, 601, 0.1);
  a /= 2.0 * a.cwiseAbs().maxCoeff();
  Vector b = oracles::random_matrix(d, 1, 602).col(0);
  b /= 2.0 * b.cwiseAbs().maxCoeff();
  const SimplexQp qp(a, b);

  AlmConfig cfg;
  const AlmResult res = alm_solve(qp, cfg);
  REQUIRE(res.converged);

  // replay the multiplier schedule with the standalone step operations
  AlmState st;
  st.theta = Vector::Constant(d, 1.0 / static_cast<double>(d));
  st.v = st.theta;
  st.lambda1 = Vector::Zero(d);
  st.lambda2 = 0.0;
  st.mu = cfg.mu0;
  for (int it = 0; it < res.iterations; ++it) {
    st.theta = alm_theta_step(st, qp);
    st.v = alm_v_step(st.theta, st.lambda1, st.mu);
    st.lambda1 += st.mu * (st.theta - st.v);
    st.lambda2 += st.mu * (st.theta.sum() - 1.0);
    st.mu *= cfg.rho;
  }
  Vector replay = st.theta.cwiseMax(0.0);
  replay /= replay.sum();
  CHECK((replay - res.theta).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("alm rejects non-PSD input and bad configs") {
  CHECK_THROWS_AS(alm_solve(SimplexQp(-Matrix::Identity(3, 3), Vector::Zero(3))),
                  std::invalid_argument);
  AlmConfig bad;
  bad.rho = 2.5;
  CHECK_THROWS_AS(
      alm_solve(SimplexQp(Matrix::Identity(2, 2), Vector::Zero(2)), bad),
      std::invalid_argument);
  Matrix asym(2, 2);
  asym << 0, 1, 0, 0;
  CHECK_THROWS_AS(SimplexQp(asym, Vector::Zero(2)), std::invalid_argument);
}
