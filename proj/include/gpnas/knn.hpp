#pragma once

#include <string>

#include "gpnas/types.hpp"

namespace gpnas {

enum class KnnMetric { Euclidean, Hamming };

const char* to_string(KnnMetric metric);
KnnMetric knn_metric_from_string(const std::string& s);

struct KnnModel {
  MatrixXd X_train;
  VectorXd y_train;
  int k = 5;
  KnnMetric metric = KnnMetric::Euclidean;
};

KnnModel knn_fit(MatrixXd X, VectorXd y, int k, KnnMetric metric = KnnMetric::Euclidean);

/// Unweighted mean of the k nearest training targets. Equal distances are broken by the
/// lower training index.
VectorXd knn_predict(const KnnModel& model, const MatrixXd& X_star);

}  // namespace gpnas
