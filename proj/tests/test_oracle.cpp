#include <doctest.h>

#include <random>

#include "spectralfield/calculus.hpp"
#include "spectralfield/errors.hpp"
#include "spectralfield/oracle.hpp"
#include "support/test_fields.hpp"

using namespace spectralfield;

namespace {
Eigen::Vector2d pt(double x, double y) { return Eigen::Vector2d(x, y); }
}

TEST_CASE("fd_grad_lambda closed forms") {
  const Eigen::VectorXd g = fdGradLambda(quarticField(), pt(1, 0), 1);
  CHECK((g - Eigen::Vector2d(2, 0)).norm() < 1e-8);

  const Eigen::VectorXd gc = fdGradLambda(cubicField(), pt(1, 0), 0);
  CHECK((gc - Eigen::Vector2d(-1, 0)).norm() < 1e-8);

  const PolyMatrixField constant =
      PolyMatrixField::constant(Eigen::Vector2d(1, 2).asDiagonal(), 2);
  CHECK(fdGradLambda(constant, pt(0.5, 0.5), 0).norm() < 1e-12);
}

TEST_CASE("fd_grad_lambda refuses unstable tracking") {
  // near the cubic crossing the gap is ~2|x|, far below the step guard
  FDConfig cfg;
  cfg.h = 1e-2;
  CHECK_THROWS_AS(fdGradLambda(cubicField(), pt(1e-4, 0), 0, cfg), UnstableTrackingError);
}

TEST_CASE("fd_hess_lambda closed forms") {
  const Eigen::MatrixXd H = fdHessLambda(quarticField(), pt(1, 0), 1);
  CHECK((H - 2 * Eigen::Matrix2d::Identity()).norm() < 1e-5);

  Eigen::Matrix2d expected;
  expected << 0, 0, 0, 1;
  const Eigen::MatrixXd Hc = fdHessLambda(cubicField(), pt(1, 0), 1);
  CHECK((Hc - expected).norm() < 1e-5);

  const PolyMatrixField constant =
      PolyMatrixField::constant(Eigen::Vector2d(1, 2).asDiagonal(), 2);
  CHECK(fdHessLambda(constant, pt(0, 0), 0).norm() < 1e-9);
}

TEST_CASE("fd_dproj closed form") {
  Eigen::Matrix2d expected;
  expected << 0, -1, -1, 0;
  const Eigen::MatrixXd DP = fdDProj(quarticField(), pt(1, 0), 1, pt(0, 1));
  CHECK((DP - expected).norm() < 1e-6);

  const PolyMatrixField constant =
      PolyMatrixField::constant(Eigen::Vector2d(1, 2).asDiagonal(), 2);
  CHECK(fdDProj(constant, pt(0, 0), 0, pt(1, 0)).norm() < 1e-12);

  // scalar field c(x) I: P is identically I
  const Polynomial c = Polynomial::variable(2, 0) + Polynomial::constant(2, 2.0);
  std::vector<Polynomial> entries = {c, Polynomial::zero(2), Polynomial::zero(2), c};
  const PolyMatrixField scalar(2, 2, std::move(entries));
  CHECK(fdDProj(scalar, pt(0.3, 0.1), 0, pt(1, 0)).norm() < 1e-10);
}

TEST_CASE("oracles agree with the closed-form derivatives on random fields") {
  std::mt19937_64 rng(61);
  int trials = 0;
  while (trials < 15) {
    std::uniform_int_distribution<int> msize(2, 4), nsize(1, 3);
    const int m = msize(rng), n = nsize(rng);
    const PolyMatrixField f = testing::randomField(rng, m, n, 3);
    const Eigen::VectorXd x = testing::randomVector(rng, n);
    if (testing::spectralGapAt(f, x) < 0.3) continue;
    ++trials;
    std::uniform_int_distribution<int> jpick(0, m - 1);
    const int j = jpick(rng);
    const auto ctx = makeContext(f, x, j);

    const Eigen::RowVectorXd g = gradLambda(ctx);
    const Eigen::VectorXd og = fdGradLambda(f, x, j);
    CHECK((g.transpose() - og).norm() <= 1e-6 * (1 + og.norm()));

    const Eigen::MatrixXd Hl = hessLambda(ctx);
    const Eigen::MatrixXd oh = fdHessLambda(f, x, j);
    CHECK((Hl - oh).norm() <= 1e-4 * (1 + oh.norm()));

    Eigen::VectorXd e = testing::randomVector(rng, n);
    e.normalize();
    const Eigen::MatrixXd DP = dirDerivProj(ctx, e);
    const Eigen::MatrixXd op = fdDProj(f, x, j, e);
    CHECK((DP - op).norm() <= 1e-5 * (1 + op.norm()));
  }
}

TEST_CASE("kyfan_bruteforce") {
  const Eigen::MatrixXd X = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const double v = kyFanBruteForce(X, 2, 100000, 0);
  CHECK(v >= 3.0 - 1e-12);
  CHECK(v <= 3.05);

  CHECK(kyFanBruteForce(X, 3, 10, 1) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(kyFanBruteForce(X, 0, 10, 1) == 0.0);

  // determinism given the seed
  CHECK(kyFanBruteForce(X, 1, 500, 42) == kyFanBruteForce(X, 1, 500, 42));
  CHECK_THROWS_AS(kyFanBruteForce(X, 5, 10, 0), DimensionError);
}

TEST_CASE("kyfan_bruteforce never undercuts the exact sum") {
  std::mt19937_64 rng(62);
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd X = testing::randomSymmetric(rng, 4);
    const SpectralDecomposition d = decompose(X);
    for (int k = 0; k <= 4; ++k)
      CHECK(kyFanBruteForce(X, k, 2000, t) >= kyFanSum(X, k, d).value - 1e-9);
  }
}

TEST_CASE("fit_expansion_order") {
  const std::vector<double> steps = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

  // quartic eigenvalues are exactly quadratic off the origin
  const SlopeFit exact = fitExpansionOrder(quarticField(), pt(1, 0.2), 1, pt(0.3, 1), steps);
  CHECK(exact.exact);

  // cubic at (1,0) along (0,1): residual is O(h^4)
  const SlopeFit quartic_order = fitExpansionOrder(cubicField(), pt(1, 0), 1, pt(0, 1), steps);
  CHECK_FALSE(quartic_order.exact);
  CHECK(quartic_order.fitted_order == doctest::Approx(4.0).epsilon(0.15));

  // generic separated analytic fields beat the o(h²) threshold
  std::mt19937_64 rng(63);
  int trials = 0;
  while (trials < 5) {
    const PolyMatrixField f = testing::randomField(rng, 3, 2, 3);
    const Eigen::VectorXd x = testing::randomVector(rng, 2);
    if (testing::spectralGapAt(f, x) < 1e-1) continue;
    ++trials;
    Eigen::VectorXd e = testing::randomVector(rng, 2);
    e.normalize();
    const SlopeFit fit = fitExpansionOrder(f, x, 0, e, steps);
    if (!fit.exact) CHECK(fit.fitted_order >= 2.9);
  }
}
