#pragma once

// Rank -> score mapping. A rank r among n labels is sent through the inverse CDF of the
// chosen distribution at quantile (n - r + 0.5) / n, so rank 1 receives the highest score.

#include <optional>
#include <variant>

#include "gpnas/dataset.hpp"
#include "gpnas/types.hpp"

namespace gpnas {

struct NormalScores {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Skew-normal with negative shape (long left tail).
struct LeftSkewedScores {
  double location = 0.0;
  double scale = 1.0;
  double shape = -4.0;
};

using ScoreDistribution = std::variant<NormalScores, LeftSkewedScores>;

void validate(const ScoreDistribution& dist);

double quantile(const ScoreDistribution& dist, double q);
double median(const ScoreDistribution& dist);

VectorXd ranks_to_scores(const VectorXi& ranks, const ScoreDistribution& dist);

/// Highest score gets rank 1; tied scores share the smallest rank of their group.
VectorXi scores_to_ranks(const VectorXd& scores);

/// Regression targets for a labelled dataset (or subset). Labels are re-ranked within the
/// given records first, so subsets of a ranked task map onto the full quantile range.
/// Score-labelled data, or no distribution, yields the orientation-normalized goodness.
VectorXd training_targets(const TaskDataset& ds, const std::optional<ScoreDistribution>& dist);

}  // namespace gpnas
