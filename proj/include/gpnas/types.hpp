#pragma once

#include <Eigen/Core>

namespace gpnas {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;
using VectorXi = Vector<int>;
using Index = Eigen::Index;

}  // namespace gpnas
