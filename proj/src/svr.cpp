#include "gpnas/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gpnas/error.hpp"

namespace gpnas {

namespace {

constexpr double kTau = 1e-12;

}  // namespace

SvrDualSolution solve_svr_dual(const MatrixXd& K, const VectorXd& y, const SvrParams& params) {
  const Index n = y.size();
  if (K.rows() != n || K.cols() != n) fail(ErrorKind::Usage, "SVR: kernel matrix does not match target length");
  if (n < 2) fail(ErrorKind::Data, "SVR needs at least 2 training points");
  if (!(params.C > 0.0)) fail(ErrorKind::Usage, "SVR: C must be positive");
  if (!(params.epsilon >= 0.0)) fail(ErrorKind::Usage, "SVR: epsilon must be non-negative");
  if (!(params.tol > 0.0) || params.max_iter < 1) fail(ErrorKind::Usage, "SVR: tol and max_iter must be positive");

  const Index l = 2 * n;
  const double C = params.C;
  auto sign = [n](Index t) { return t < n ? 1.0 : -1.0; };
  auto q = [&](Index a, Index b) { return sign(a) * sign(b) * K(a % n, b % n); };

  VectorXd beta = VectorXd::Zero(l);
  VectorXd grad(l);
  grad.head(n) = params.epsilon - y.array();
  grad.tail(n) = params.epsilon + y.array();

  const long max_steps = static_cast<long>(params.max_iter) * static_cast<long>(n);
  SvrDualSolution sol;
  for (;; ++sol.iterations) {
    Index i = -1, j = -1;
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    for (Index t = 0; t < l; ++t) {
      const double s = sign(t);
      const double v = -s * grad[t];
      const bool up = (s > 0 && beta[t] < C) || (s < 0 && beta[t] > 0);
      const bool low = (s > 0 && beta[t] > 0) || (s < 0 && beta[t] < C);
      if (up && v > g_max) g_max = v, i = t;
      if (low && v < g_min) g_min = v, j = t;
    }
    if (i < 0 || j < 0 || g_max - g_min < params.tol) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= max_steps) break;

    const double old_i = beta[i], old_j = beta[j];
    const double q_ij = q(i, j);
    if (sign(i) != sign(j)) {
      double quad = q(i, i) + q(j, j) + 2.0 * q_ij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = beta[i] - beta[j];
      beta[i] += delta;
      beta[j] += delta;
      if (diff > 0) {
        if (beta[j] < 0) beta[j] = 0, beta[i] = diff;
      } else {
        if (beta[i] < 0) beta[i] = 0, beta[j] = -diff;
      }
      if (diff > 0) {
        if (beta[i] > C) beta[i] = C, beta[j] = C - diff;
      } else {
        if (beta[j] > C) beta[j] = C, beta[i] = C + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q_ij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = beta[i] + beta[j];
      beta[i] -= delta;
      beta[j] += delta;
      if (sum > C) {
        if (beta[i] > C) beta[i] = C, beta[j] = sum - C;
      } else {
        if (beta[j] < 0) beta[j] = 0, beta[i] = sum;
      }
      if (sum > C) {
        if (beta[j] > C) beta[j] = C, beta[i] = sum - C;
      } else {
        if (beta[i] < 0) beta[i] = 0, beta[j] = sum;
      }
    }

    const double d_i = beta[i] - old_i, d_j = beta[j] - old_j;
    for (Index t = 0; t < l; ++t) grad[t] += q(t, i) * d_i + q(t, j) * d_j;
  }

  // Bias from the free variables' KKT condition, else the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
  long n_free = 0;
  for (Index t = 0; t < l; ++t) {
    const double s = sign(t);
    const double yg = s * grad[t];
    if (beta[t] >= C) {
      if (s < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (beta[t] <= 0) {
      if (s > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

  sol.alpha = beta.head(n);
  sol.alpha_star = beta.tail(n);
  sol.coef = sol.alpha - sol.alpha_star;
  sol.bias = -rho;
  sol.objective = svr_dual_objective(K, y, params.epsilon, sol.alpha, sol.alpha_star);
  return sol;
}

double svr_dual_objective(const MatrixXd& K, const VectorXd& y, double epsilon, const VectorXd& alpha,
                          const VectorXd& alpha_star) {
  const VectorXd c = alpha - alpha_star;
  return 0.5 * c.dot(K * c) + epsilon * (alpha.sum() + alpha_star.sum()) - y.dot(c);
}

SvrModel svr_fit(const MatrixXd& X, const VectorXd& y, const KernelSpec<double>& kernel, const SvrParams& params) {
  if (X.rows() != y.size()) fail(ErrorKind::Usage, "SVR: X rows and y length differ");
  validate(kernel);
  const auto sol = solve_svr_dual(gram(kernel, X), y, params);
  SvrModel m;
  m.X_train = X;
  m.coef = sol.coef;
  m.bias = sol.bias;
  m.kernel = kernel;
  m.params = params;
  m.converged = sol.converged;
  return m;
}

VectorXd svr_predict(const SvrModel& model, const MatrixXd& X_star) {
  if (X_star.cols() != model.X_train.cols()) fail(ErrorKind::Usage, "SVR predict: input dimension mismatch");
  return (gram(model.kernel, X_star, model.X_train) * model.coef).array() + model.bias;
}

}  // namespace gpnas
