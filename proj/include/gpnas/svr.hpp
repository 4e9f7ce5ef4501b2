#pragma once

// Epsilon-insensitive support vector regression trained by SMO.
//
// Dual over beta = [alpha; alpha*] in [0, C]^{2n}, with s = [+1..; -1..]:
//
//   min  1/2 beta^T Q beta + p^T beta    s.t.  s^T beta = 0
//   Q(i, j) = s_i s_j K(i mod n, j mod n),  p = [eps - y; eps + y]
//
// Each step updates the maximal KKT-violating pair analytically.

#include "gpnas/kernels.hpp"
#include "gpnas/types.hpp"

namespace gpnas {

struct SvrParams {
  double C = 1.0;
  double epsilon = 0.01;
  double tol = 1e-3;
  int max_iter = 1000;  // sweeps; one sweep is n pair updates
};

struct SvrDualSolution {
  VectorXd alpha;       // multipliers for f(x_i) <= y_i + eps violations
  VectorXd alpha_star;  // multipliers for f(x_i) >= y_i - eps violations
  VectorXd coef;        // alpha - alpha_star
  double bias = 0.0;
  double objective = 0.0;  // dual objective in minimization form
  long iterations = 0;
  bool converged = false;
};

/// Solves the dual for a precomputed n x n kernel matrix.
SvrDualSolution solve_svr_dual(const MatrixXd& K, const VectorXd& y, const SvrParams& params);

/// 1/2 c^T K c + eps * sum(alpha + alpha*) - y^T c, with c = alpha - alpha*.
double svr_dual_objective(const MatrixXd& K, const VectorXd& y, double epsilon, const VectorXd& alpha,
                          const VectorXd& alpha_star);

struct SvrModel {
  MatrixXd X_train;
  VectorXd coef;
  double bias = 0.0;
  KernelSpec<double> kernel{SqrtRbf<double>{}};
  SvrParams params;
  bool converged = false;
};

/// Non-convergence is reported through SvrModel::converged rather than thrown.
SvrModel svr_fit(const MatrixXd& X, const VectorXd& y, const KernelSpec<double>& kernel, const SvrParams& params = {});

VectorXd svr_predict(const SvrModel& model, const MatrixXd& X_star);

}  // namespace gpnas
