#include <doctest.h>

#include <random>

#include "gpnas/knn.hpp"
#include "gpnas/svr.hpp"
#include "oracles.hpp"

using namespace gpnas;

namespace {

MatrixXd random_matrix(std::mt19937_64& rng, Index n, Index d) {
  std::normal_distribution<double> nd;
  MatrixXd X(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) X(i, j) = nd(rng);
  return X;
}

MatrixXd linear_kernel(const MatrixXd& X) { return X * X.transpose(); }

}  // namespace

TEST_CASE("knn with k = n predicts the mean") {
  std::mt19937_64 rng(14);
  const MatrixXd X = random_matrix(rng, 9, 3);
  const VectorXd y = random_matrix(rng, 9, 1).col(0);
  const auto m = knn_fit(X, y, 9);
  const VectorXd p = knn_predict(m, random_matrix(rng, 4, 3));
  for (Index i = 0; i < p.size(); ++i) CHECK(p[i] == doctest::Approx(y.mean()));
}

TEST_CASE("knn with k = 1 returns the training target of a training query") {
  std::mt19937_64 rng(15);
  const MatrixXd X = random_matrix(rng, 8, 3);
  const VectorXd y = random_matrix(rng, 8, 1).col(0);
  CHECK(knn_predict(knn_fit(X, y, 1), X) == y);
}

TEST_CASE("knn matches the exhaustive-sort oracle") {
  std::mt19937_64 rng(16);
  for (int rep = 0; rep < 20; ++rep) {
    const MatrixXd X = random_matrix(rng, 8, 2);
    const VectorXd y = random_matrix(rng, 8, 1).col(0);
    const MatrixXd Q = random_matrix(rng, 5, 2);
    const VectorXd p = knn_predict(knn_fit(X, y, 3), Q);
    for (Index q = 0; q < Q.rows(); ++q) {
      double s = 0.0;
      for (Index i : oracle::knn_indices(X, Q.row(q).transpose(), 3)) s += y[i];
      CHECK(p[q] == doctest::Approx(s / 3.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("knn breaks distance ties by lower index") {
  MatrixXd X(3, 1);
  X << -1, 1, 1;
  VectorXd y(3);
  y << 10, 20, 30;
  MatrixXd q(1, 1);
  q << 0;
  CHECK(knn_predict(knn_fit(X, y, 1), q)[0] == 10.0);
  CHECK(knn_predict(knn_fit(X, y, 2), q)[0] == 15.0);
}

TEST_CASE("hamming metric counts differing coordinates") {
  MatrixXd X(2, 3);
  X << 0, 0, 0, 1, 1, 0;
  VectorXd y(2);
  y << 1, 2;
  MatrixXd q(1, 3);
  q << 1, 0, 0;
  CHECK(knn_predict(knn_fit(X, y, 1, KnnMetric::Hamming), q)[0] == 1.0);
}

TEST_CASE("knn rejects k outside [1, n]") {
  CHECK_THROWS_AS(knn_fit(MatrixXd::Zero(3, 1), VectorXd::Zero(3), 4), Error);
  CHECK_THROWS_AS(knn_fit(MatrixXd::Zero(3, 1), VectorXd::Zero(3), 0), Error);
}

TEST_CASE("svr on constant targets keeps all duals at zero") {
  std::mt19937_64 rng(17);
  const MatrixXd X = random_matrix(rng, 6, 2);
  const auto s = solve_svr_dual(gram(KernelSpec<double>{SqrtRbf<double>{1.0}}, X), VectorXd::Constant(6, 2.5), {});
  CHECK(s.coef.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.bias == doctest::Approx(2.5));
}

TEST_CASE("two-point linear-kernel svr solved by hand") {
  MatrixXd X(2, 1);
  X << 0, 1;
  VectorXd y(2);
  y << 0, 1;
  SvrParams p;
  p.C = 10.0;
  p.epsilon = 0.1;
  p.tol = 1e-10;
  const auto s = solve_svr_dual(linear_kernel(X), y, p);
  CHECK(s.coef[0] == doctest::Approx(-0.8).epsilon(1e-8));
  CHECK(s.coef[1] == doctest::Approx(0.8).epsilon(1e-8));
  CHECK(s.bias == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(s.converged);
}

TEST_CASE("svr dual matches projected-gradient reference and respects the box") {
  std::mt19937_64 rng(18);
  for (int rep = 0; rep < 10; ++rep) {
    const Index n = 3 + static_cast<Index>(rng() % 10);
    const MatrixXd X = random_matrix(rng, n, 3);
    const VectorXd y = random_matrix(rng, n, 1).col(0);
    const MatrixXd K = gram(KernelSpec<double>{SqrtRbf<double>{1.5}}, X);
    SvrParams p;
    p.C = 0.5 + static_cast<double>(rng() % 4);
    p.epsilon = 0.05;
    p.tol = 1e-8;
    const auto s = solve_svr_dual(K, y, p);
    const double ref = oracle::svr_dual_reference(K, y, p.C, p.epsilon);
    CHECK(std::abs(s.objective - ref) <= 1e-4);
    CHECK(s.objective == doctest::Approx(svr_dual_objective(K, y, p.epsilon, s.alpha, s.alpha_star)));
    CHECK(s.alpha.minCoeff() >= 0.0);
    CHECK(s.alpha_star.minCoeff() >= 0.0);
    CHECK(s.alpha.maxCoeff() <= p.C + 1e-12);
    CHECK(s.alpha_star.maxCoeff() <= p.C + 1e-12);
    CHECK(std::abs(s.coef.sum()) < 1e-9);
  }
}

TEST_CASE("svr training points off the support lie inside the tube") {
  std::mt19937_64 rng(19);
  const MatrixXd X = random_matrix(rng, 12, 2);
  const VectorXd y = random_matrix(rng, 12, 1).col(0);
  SvrParams p;
  p.C = 5.0;
  p.epsilon = 0.1;
  p.tol = 1e-8;
  const auto m = svr_fit(X, y, SqrtRbf<double>{1.0}, p);
  const VectorXd f = svr_predict(m, X);
  for (Index i = 0; i < 12; ++i)
    if (m.coef[i] == 0.0) CHECK(std::abs(f[i] - y[i]) <= p.epsilon + 1e-6);
}
