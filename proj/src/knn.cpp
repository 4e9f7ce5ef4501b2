#include "gpnas/knn.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "gpnas/error.hpp"

namespace gpnas {

const char* to_string(KnnMetric metric) { return metric == KnnMetric::Euclidean ? "euclidean" : "hamming"; }

KnnMetric knn_metric_from_string(const std::string& s) {
  if (s == "euclidean") return KnnMetric::Euclidean;
  if (s == "hamming") return KnnMetric::Hamming;
  fail(ErrorKind::Usage, "unknown KNN metric '" + s + "'");
}

KnnModel knn_fit(MatrixXd X, VectorXd y, int k, KnnMetric metric) {
  if (X.rows() != y.size()) fail(ErrorKind::Usage, "KNN: X rows and y length differ");
  if (k < 1) fail(ErrorKind::Usage, "KNN: k must be >= 1");
  if (k > X.rows()) fail(ErrorKind::Usage, "KNN: k = " + std::to_string(k) + " exceeds n = " + std::to_string(X.rows()));
  return KnnModel{std::move(X), std::move(y), k, metric};
}

VectorXd knn_predict(const KnnModel& model, const MatrixXd& X_star) {
  if (X_star.cols() != model.X_train.cols()) fail(ErrorKind::Usage, "KNN predict: input dimension mismatch");
  const Index n = model.X_train.rows();
  const auto k = static_cast<std::size_t>(model.k);
  VectorXd out(X_star.rows());
  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index q = 0; q < X_star.rows(); ++q) {
    for (Index i = 0; i < n; ++i) {
      const auto diff = model.X_train.row(i) - X_star.row(q);
      // Squared Euclidean preserves the ordering and keeps equal distances exactly equal.
      dist[static_cast<std::size_t>(i)] = model.metric == KnnMetric::Euclidean
                                              ? diff.squaredNorm()
                                              : static_cast<double>((diff.array() != 0.0).count());
    }
    std::iota(order.begin(), order.end(), Index{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), [&](Index a, Index b) {
      const double da = dist[static_cast<std::size_t>(a)], db = dist[static_cast<std::size_t>(b)];
      return da < db || (da == db && a < b);
    });
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += model.y_train[order[j]];
    out[q] = sum / static_cast<double>(k);
  }
  return out;
}

}  // namespace gpnas
