#include "gpnas/label_transform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/skew_normal.hpp>

#include "gpnas/error.hpp"

namespace gpnas {

void validate(const ScoreDistribution& dist) {
  if (const auto* n = std::get_if<NormalScores>(&dist)) {
    if (!(n->sigma > 0.0) || !std::isfinite(n->mu)) fail(ErrorKind::Usage, "normal score distribution needs sigma > 0");
  } else {
    const auto& s = std::get<LeftSkewedScores>(dist);
    if (!(s.scale > 0.0)) fail(ErrorKind::Usage, "left-skewed score distribution needs scale > 0");
    if (!(s.shape < 0.0)) fail(ErrorKind::Usage, "left-skewed score distribution needs shape < 0");
    if (!std::isfinite(s.location)) fail(ErrorKind::Usage, "left-skewed location must be finite");
  }
}

double quantile(const ScoreDistribution& dist, double q) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::Usage, "quantile level must lie in (0, 1)");
  if (const auto* n = std::get_if<NormalScores>(&dist))
    return boost::math::quantile(boost::math::normal_distribution<double>(n->mu, n->sigma), q);
  const auto& s = std::get<LeftSkewedScores>(dist);
  return boost::math::quantile(boost::math::skew_normal_distribution<double>(s.location, s.scale, s.shape), q);
}

double median(const ScoreDistribution& dist) { return quantile(dist, 0.5); }

VectorXd ranks_to_scores(const VectorXi& ranks, const ScoreDistribution& dist) {
  validate(dist);
  const Index n = ranks.size();
  if (n < 1) fail(ErrorKind::Usage, "ranks_to_scores needs at least one rank");
  if (ranks.minCoeff() < 1) fail(ErrorKind::Data, "ranks must be >= 1");
  if (ranks.maxCoeff() > n) fail(ErrorKind::Data, "rank exceeds the number of labels");
  VectorXd scores(n);
  for (Index i = 0; i < n; ++i) {
    const double q = (static_cast<double>(n - ranks[i]) + 0.5) / static_cast<double>(n);
    scores[i] = quantile(dist, q);
  }
  return scores;
}

VectorXi scores_to_ranks(const VectorXd& scores) {
  if (scores.hasNaN()) fail(ErrorKind::Numerical, "NaN in scores");
  const Index n = scores.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return scores[a] > scores[b]; });
  VectorXi ranks(n);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Index i = order[pos];
    if (pos > 0 && scores[order[pos - 1]] == scores[i])
      ranks[i] = ranks[order[pos - 1]];
    else
      ranks[i] = static_cast<int>(pos) + 1;
  }
  return ranks;
}

VectorXd training_targets(const TaskDataset& ds, const std::optional<ScoreDistribution>& dist) {
  const VectorXd good = ds.goodness();
  if (!dist || ds.label_kind == LabelKind::Score) return good;
  return ranks_to_scores(scores_to_ranks(good), *dist);
}

}  // namespace gpnas
