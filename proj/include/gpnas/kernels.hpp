#pragma once

// Square-root RBF family:
//
//   k_rbf(a, b) = exp(-sqrt(|a - b|) / l)
//   k_w(a, b)   = exp(-sqrt(sqrt((a - b)^T diag(w) (a - b))) / l)
//   k_e(a, b)   = beta1 * k_rbf(a, b) + beta2 * k_w(a, b)
//
// |.| is the Euclidean norm, so k_w with unit weights reduces to k_rbf.

#include <cmath>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>

#include <Eigen/Core>

#include "gpnas/error.hpp"
#include "gpnas/types.hpp"

namespace gpnas {

template <typename Scalar>
struct SqrtRbf {
  Scalar length{1};
};

template <typename Scalar>
struct WeightedRbf {
  Scalar length{1};
  Vector<Scalar> weights;  // diagonal of the weight matrix, one entry per input dimension
};

template <typename Scalar>
struct EnsembleKernel {
  Scalar beta1{1};
  Scalar beta2{0};
  SqrtRbf<Scalar> rbf;
  WeightedRbf<Scalar> weighted;
};

template <typename Scalar>
using KernelSpec = std::variant<SqrtRbf<Scalar>, WeightedRbf<Scalar>, EnsembleKernel<Scalar>>;

/// Input dimension the kernel is tied to, if any. SqrtRbf accepts any dimension.
template <typename Scalar>
std::optional<Index> kernel_dimension(const KernelSpec<Scalar>& spec) {
  if (const auto* w = std::get_if<WeightedRbf<Scalar>>(&spec)) return w->weights.size();
  if (const auto* e = std::get_if<EnsembleKernel<Scalar>>(&spec)) return e->weighted.weights.size();
  return std::nullopt;
}

/// Upper bound of the kernel; also its value at zero distance.
template <typename Scalar>
Scalar kernel_peak(const KernelSpec<Scalar>& spec) {
  if (const auto* e = std::get_if<EnsembleKernel<Scalar>>(&spec)) return e->beta1 + e->beta2;
  return Scalar(1);
}

namespace detail {

template <typename Scalar>
void check_length(Scalar length) {
  if (!(length > Scalar(0)) || !std::isfinite(length)) fail(ErrorKind::Usage, "kernel length must be positive");
}

template <typename Scalar>
void check_weights(const Vector<Scalar>& w) {
  for (Index i = 0; i < w.size(); ++i) {
    if (!(w[i] >= Scalar(0)) || !std::isfinite(w[i])) fail(ErrorKind::Usage, "kernel weights must be non-negative");
  }
}

}  // namespace detail

/// Throws Error(Usage) if the parameters violate the kernel invariants.
template <typename Scalar>
void validate(const KernelSpec<Scalar>& spec) {
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, SqrtRbf<Scalar>>) {
          detail::check_length(k.length);
        } else if constexpr (std::is_same_v<K, WeightedRbf<Scalar>>) {
          detail::check_length(k.length);
          detail::check_weights(k.weights);
        } else {
          detail::check_length(k.rbf.length);
          detail::check_length(k.weighted.length);
          detail::check_weights(k.weighted.weights);
          if (!(k.beta1 >= Scalar(0)) || !(k.beta2 >= Scalar(0)) || !(k.beta1 + k.beta2 > Scalar(0)))
            fail(ErrorKind::Usage, "ensemble kernel betas must be non-negative with positive sum");
        }
      },
      spec);
}

template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar eval(const SqrtRbf<Scalar>& k, const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using std::exp;
  using std::sqrt;
  const Scalar dist = sqrt((a - b).squaredNorm());
  return exp(-sqrt(dist) / k.length);
}

template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar eval(const WeightedRbf<Scalar>& k, const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using std::exp;
  using std::sqrt;
  const Scalar dist = sqrt(((a - b).reshaped().array().square() * k.weights.array()).sum());
  return exp(-sqrt(dist) / k.length);
}

template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar eval(const EnsembleKernel<Scalar>& k, const Eigen::MatrixBase<DerivedA>& a,
            const Eigen::MatrixBase<DerivedB>& b) {
  return k.beta1 * eval(k.rbf, a, b) + k.beta2 * eval(k.weighted, a, b);
}

/// Kernel value between two row vectors. Throws on dimension mismatch.
template <typename DerivedA, typename DerivedB, typename Scalar = typename DerivedA::Scalar>
Scalar eval(const std::type_identity_t<KernelSpec<Scalar>>& spec, const Eigen::MatrixBase<DerivedA>& a,
            const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) fail(ErrorKind::Usage, "kernel inputs differ in dimension");
  const auto dim = kernel_dimension(spec);
  if (dim && *dim != a.size()) fail(ErrorKind::Usage, "kernel weight dimension does not match input dimension");
  return std::visit([&](const auto& k) -> Scalar { return eval(k, a, b); }, spec);
}

namespace detail {

template <typename Scalar, typename DerivedX>
void check_gram_dims(const KernelSpec<Scalar>& spec, const Eigen::MatrixBase<DerivedX>& X) {
  const auto dim = kernel_dimension(spec);
  if (dim && *dim != X.cols()) fail(ErrorKind::Usage, "kernel weight dimension does not match input dimension");
}

}  // namespace detail

/// Cross Gram matrix G(i, j) = k(X_i, Y_j).
template <typename DerivedX, typename DerivedY, typename Scalar = typename DerivedX::Scalar>
Matrix<Scalar> gram(const std::type_identity_t<KernelSpec<Scalar>>& spec, const Eigen::MatrixBase<DerivedX>& X,
                    const Eigen::MatrixBase<DerivedY>& Y) {
  if (X.cols() != Y.cols()) fail(ErrorKind::Usage, "gram inputs differ in column dimension");
  detail::check_gram_dims(spec, X);
  Matrix<Scalar> G(X.rows(), Y.rows());
  std::visit(
      [&](const auto& k) {
        for (Index j = 0; j < Y.rows(); ++j)
          for (Index i = 0; i < X.rows(); ++i) G(i, j) = eval(k, X.row(i), Y.row(j));
      },
      spec);
  return G;
}

/// Symmetric Gram matrix of X with itself; each unordered pair is evaluated once and mirrored.
template <typename DerivedX, typename Scalar = typename DerivedX::Scalar>
Matrix<Scalar> gram(const std::type_identity_t<KernelSpec<Scalar>>& spec, const Eigen::MatrixBase<DerivedX>& X) {
  detail::check_gram_dims(spec, X);
  const Index n = X.rows();
  Matrix<Scalar> G(n, n);
  std::visit(
      [&](const auto& k) {
        for (Index j = 0; j < n; ++j) {
          for (Index i = j; i < n; ++i) {
            const Scalar v = eval(k, X.row(i), X.row(j));
            G(i, j) = v;
            G(j, i) = v;
          }
        }
      },
      spec);
  return G;
}

}  // namespace gpnas
