#pragma once

// Gaussian-process regression with a pluggable prior mean.
//
// Posterior mean at test inputs X*:
//
//   m_post(X*) = m(X*) + k(X*, X) (K + s2 I)^{-1} (y - m(X))
//
// The system is solved through a Cholesky factor of K + s2 I (plus jitter when the
// factorization needs it); the inverse is never formed.

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/QR>

#include "gpnas/error.hpp"
#include "gpnas/kernels.hpp"
#include "gpnas/types.hpp"

namespace gpnas {

/// m(x) = w . x + bias
template <typename Scalar>
struct LinearPrior {
  Vector<Scalar> weights;
  Scalar bias{0};

  template <typename Derived>
  Vector<Scalar> operator()(const Eigen::MatrixBase<Derived>& X) const {
    if (X.cols() != weights.size()) fail(ErrorKind::Usage, "linear prior dimension does not match input dimension");
    return (X * weights).array() + bias;
  }
};

/// Prior whose values are produced outside the GP (e.g. an average of base learners) and
/// handed to gp_fit / gp_predict explicitly.
struct ExternalPrior {
  std::string source;
};

template <typename Scalar>
using PriorMean = std::variant<LinearPrior<Scalar>, ExternalPrior>;

/// Ridge regression with an unpenalized intercept:
/// argmin |X w + b - y|^2 + ridge |w|^2. With ridge = 0 the minimum-norm w is returned.
template <typename DerivedX, typename DerivedY, typename Scalar = typename DerivedX::Scalar>
LinearPrior<Scalar> fit_prior_linear(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
                                     std::type_identity_t<Scalar> ridge) {
  if (X.rows() < 1) fail(ErrorKind::Data, "linear prior needs at least one sample");
  if (X.rows() != y.size()) fail(ErrorKind::Usage, "linear prior: X rows and y length differ");
  if (!(ridge >= Scalar(0))) fail(ErrorKind::Usage, "ridge must be non-negative");

  const Vector<Scalar> x_mean = X.colwise().mean().transpose();
  const Scalar y_mean = y.mean();
  const Matrix<Scalar> Xc = X.rowwise() - x_mean.transpose();
  const Vector<Scalar> yc = y.array() - y_mean;

  LinearPrior<Scalar> prior;
  if (ridge > Scalar(0)) {
    Matrix<Scalar> A = Xc.transpose() * Xc;
    A.diagonal().array() += ridge;
    prior.weights = A.ldlt().solve(Xc.transpose() * yc);
  } else {
    prior.weights = Xc.completeOrthogonalDecomposition().solve(yc);
  }
  prior.bias = y_mean - x_mean.dot(prior.weights);
  return prior;
}

/// Jitter levels tried, in order, when factoring K + s2 I.
inline constexpr std::array<double, 8> kJitterLadder = {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4};

template <typename Scalar>
class GpModel {
 public:
  const Matrix<Scalar>& train_inputs() const { return X_; }
  const Vector<Scalar>& residuals() const { return residuals_; }
  const Vector<Scalar>& dual() const { return dual_; }
  const KernelSpec<Scalar>& kernel() const { return kernel_; }
  const PriorMean<Scalar>& prior() const { return prior_; }
  Scalar noise_variance() const { return sigma_n2_; }
  Scalar jitter_used() const { return jitter_; }
  Index input_dim() const { return X_.cols(); }
  Index size() const { return X_.rows(); }

  /// Lower-triangular factor L with L L^T = K + (s2 + jitter) I.
  Matrix<Scalar> cholesky_factor() const { return llt_.matrixL(); }

  /// Solves (K + (s2 + jitter) I) z = rhs.
  template <typename Derived>
  Matrix<Scalar> solve(const Eigen::MatrixBase<Derived>& rhs) const {
    return llt_.solve(rhs);
  }

  /// Rebuilds a model from stored state (inputs, residuals, kernel, noise, jitter); the
  /// factorization is recomputed at exactly the recorded jitter.
  static GpModel restore(Matrix<Scalar> X, Vector<Scalar> residuals, KernelSpec<Scalar> kernel,
                         PriorMean<Scalar> prior, Scalar sigma_n2, Scalar jitter) {
    GpModel m;
    m.X_ = std::move(X);
    m.residuals_ = std::move(residuals);
    m.kernel_ = std::move(kernel);
    m.prior_ = std::move(prior);
    m.sigma_n2_ = sigma_n2;
    Matrix<Scalar> A = gram(m.kernel_, m.X_);
    A.diagonal().array() += sigma_n2 + jitter;
    m.llt_.compute(A);
    if (m.llt_.info() != Eigen::Success) fail(ErrorKind::Numerical, "stored GP state does not factor");
    m.jitter_ = jitter;
    m.dual_ = m.llt_.solve(m.residuals_);
    return m;
  }

  /// Factors K + s2 I with escalating jitter and solves for the dual weights.
  template <typename DerivedX, typename DerivedY>
  static GpModel fit(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
                     const KernelSpec<Scalar>& kernel, const PriorMean<Scalar>& prior, Scalar sigma_n2,
                     const std::optional<Vector<Scalar>>& prior_at_train);

 private:
  Matrix<Scalar> X_;
  Vector<Scalar> residuals_;
  Vector<Scalar> dual_;
  Eigen::LLT<Matrix<Scalar>> llt_;
  KernelSpec<Scalar> kernel_{SqrtRbf<Scalar>{}};
  PriorMean<Scalar> prior_{ExternalPrior{}};
  Scalar sigma_n2_{0};
  Scalar jitter_{0};
};

namespace detail {

template <typename Scalar, typename Derived>
Vector<Scalar> prior_values(const PriorMean<Scalar>& prior, const Eigen::MatrixBase<Derived>& X,
                            const std::optional<Vector<Scalar>>& supplied) {
  if (const auto* lin = std::get_if<LinearPrior<Scalar>>(&prior)) {
    if (supplied) fail(ErrorKind::Usage, "prior values supplied for a linear prior");
    return (*lin)(X);
  }
  if (!supplied) fail(ErrorKind::Usage, "external prior requires supplied prior values");
  if (supplied->size() != X.rows()) fail(ErrorKind::Usage, "supplied prior values do not match row count");
  return *supplied;
}

}  // namespace detail

template <typename Scalar>
template <typename DerivedX, typename DerivedY>
GpModel<Scalar> GpModel<Scalar>::fit(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
                                     const KernelSpec<Scalar>& kernel, const PriorMean<Scalar>& prior,
                                     Scalar sigma_n2, const std::optional<Vector<Scalar>>& prior_at_train) {
  if (X.rows() < 1) fail(ErrorKind::Data, "GP fit needs at least one training point");
  if (X.rows() != y.size()) fail(ErrorKind::Usage, "GP fit: X rows and y length differ");
  if (!(sigma_n2 >= Scalar(0))) fail(ErrorKind::Usage, "noise variance must be non-negative");
  validate(kernel);

  GpModel m;
  m.X_ = X;
  m.kernel_ = kernel;
  m.prior_ = prior;
  m.sigma_n2_ = sigma_n2;
  m.residuals_ = y - detail::prior_values(prior, X, prior_at_train);
  if (!m.residuals_.allFinite()) fail(ErrorKind::Numerical, "non-finite residuals in GP fit");

  const Matrix<Scalar> K = gram(kernel, m.X_);
  for (double jitter : kJitterLadder) {
    Matrix<Scalar> A = K;
    A.diagonal().array() += sigma_n2 + Scalar(jitter);
    m.llt_.compute(A);
    if (m.llt_.info() == Eigen::Success) {
      m.jitter_ = Scalar(jitter);
      m.dual_ = m.llt_.solve(m.residuals_);
      if (m.dual_.allFinite()) return m;
    }
  }
  std::ostringstream msg;
  msg << "kernel matrix is not positive definite (final jitter tried " << kJitterLadder.back() << ")";
  fail(ErrorKind::Numerical, msg.str());
}

/// Fits the GP. `prior_at_train` must be given exactly when the prior is External.
template <typename DerivedX, typename DerivedY, typename Scalar = typename DerivedX::Scalar>
GpModel<Scalar> gp_fit(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
                       const std::type_identity_t<KernelSpec<Scalar>>& kernel,
                       const std::type_identity_t<PriorMean<Scalar>>& prior, std::type_identity_t<Scalar> sigma_n2,
                       const std::type_identity_t<std::optional<Vector<Scalar>>>& prior_at_train = std::nullopt) {
  return GpModel<Scalar>::fit(X, y, kernel, prior, sigma_n2, prior_at_train);
}

/// k(X*, X) (K + s2 I)^{-1} (y - m(X)), the data-driven correction to the prior.
template <typename Scalar, typename Derived>
Vector<Scalar> gp_correction(const GpModel<Scalar>& model, const Eigen::MatrixBase<Derived>& X_star) {
  if (X_star.cols() != model.input_dim()) fail(ErrorKind::Usage, "GP predict: input dimension mismatch");
  return gram(model.kernel(), X_star, model.train_inputs()) * model.dual();
}

/// Posterior mean. `prior_at_star` must be given exactly when the prior is External.
template <typename Scalar, typename Derived>
Vector<Scalar> gp_predict(const GpModel<Scalar>& model, const Eigen::MatrixBase<Derived>& X_star,
                          const std::type_identity_t<std::optional<Vector<Scalar>>>& prior_at_star = std::nullopt) {
  if (X_star.cols() != model.input_dim()) fail(ErrorKind::Usage, "GP predict: input dimension mismatch");
  return detail::prior_values(model.prior(), X_star, prior_at_star) + gp_correction(model, X_star);
}

/// Posterior variance k(x*, x*) - k*^T (K + s2 I)^{-1} k*, clamped at zero.
template <typename Scalar, typename Derived>
Vector<Scalar> gp_posterior_variance(const GpModel<Scalar>& model, const Eigen::MatrixBase<Derived>& X_star) {
  if (X_star.cols() != model.input_dim()) fail(ErrorKind::Usage, "GP predict: input dimension mismatch");
  const Matrix<Scalar> Ks = gram(model.kernel(), model.train_inputs(), X_star);  // n x m
  const Matrix<Scalar> V = model.cholesky_factor().template triangularView<Eigen::Lower>().solve(Ks);
  Vector<Scalar> var(X_star.rows());
  for (Index j = 0; j < X_star.rows(); ++j) {
    const Scalar prior_var = eval(model.kernel(), X_star.row(j), X_star.row(j));
    var[j] = std::max(Scalar(0), prior_var - V.col(j).squaredNorm());
  }
  return var;
}

}  // namespace gpnas
