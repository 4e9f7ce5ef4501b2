#pragma once

// Bayesian optimization of the weighted kernel's diagonal. The objective is the Kendall tau
// of a weighted-kernel GP, averaged over several seeded train/validation splits.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gpnas/config.hpp"
#include "gpnas/dataset.hpp"
#include "gpnas/types.hpp"

namespace gpnas {

enum class TuneObjective { ValidationTau, TrainTau };
enum class TunePrior { Constant, Linear };

struct TuneSpec {
  /// Number of weights; 0 means one per original column (or per encoded dimension when
  /// per_encoded_dim is set).
  int dims = 0;
  bool per_encoded_dim = false;
  /// Per-dimension [low, high]; empty means [0, 1] everywhere.
  std::vector<std::pair<double, double>> bounds;
  int budget = 60;
  int init_points = 10;
  std::uint64_t seed = 0;
  TuneObjective objective = TuneObjective::ValidationTau;
  TunePrior prior = TunePrior::Constant;
  /// Search over u = w^(1/4), the scale at which a weight enters the kernel.
  bool root_warp = true;
  /// Fraction of each search coordinate that maps exactly to the lower bound (a column
  /// switched off when the bound is 0).
  double floor_fraction = 0.25;
  /// Evaluate the all-ones weighting as the first point of the initial design.
  bool include_default = true;
  int candidates = 1024;
  int split_repeats = 3;
  double split_fraction = 0.8;
  double surrogate_length = 1.0;
  /// Noise variance of the surrogate on standardized objective values.
  double surrogate_noise = 0.1;
};

struct TunePoint {
  VectorXd point;
  double value = 0.0;
};

struct TuneTrace {
  std::vector<TunePoint> evaluations;
  VectorXd best_point;
  double best_value = -1.0;
};

struct TuneResult {
  VectorXd weights;
  TuneTrace trace;
};

/// EI for maximization: (mean - best) Phi(z) + std phi(z), z = (mean - best) / std.
double expected_improvement(double mean, double std, double best);

/// n points, one per stratum in every dimension, each jittered uniformly within its stratum.
MatrixXd latin_hypercube(int n, const std::vector<std::pair<double, double>>& bounds, std::mt19937_64& rng);

/// Number of weights the tuner searches for this dataset / config / spec.
int tuned_dimension(const TaskDataset& ds, const TaskConfig& config, const TuneSpec& spec);

/// Mean Kendall tau of a weighted-kernel GP with the given weights (one per column or per
/// encoded dimension). Failed evaluations score -1.
double weight_objective(const TaskDataset& ds, const TaskConfig& config, const TuneSpec& spec, const VectorXd& weights);

/// Kendall tau on `eval` of the weighted-kernel GP the objective uses, fitted on `train`.
double holdout_tau(const TaskDataset& train, const TaskDataset& eval, const TaskConfig& config, const TuneSpec& spec,
                   const VectorXd& weights);

TuneResult tune_weights(const TaskDataset& ds, const TaskConfig& config, const TuneSpec& spec);

nlohmann::json to_json(const TuneTrace& trace);

}  // namespace gpnas
