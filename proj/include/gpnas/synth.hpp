#pragma once

#include <cstdint>
#include <filesystem>

#include "gpnas/dataset.hpp"
#include "gpnas/types.hpp"

namespace gpnas {

enum class SynthSignal {
  /// Positive random linear function of the ordinal codes (plus optional x0 * x1 term).
  Linear,
  /// Non-monotone lookup table over column 0 only; every other column is irrelevant.
  PlantedColumn,
};

struct SynthSpec {
  int n = 200;
  int dim = 8;
  int cardinality = 4;
  /// Gaussian noise standard deviation as a fraction of the signal's standard deviation.
  double noise = 0.0;
  double interaction = 0.0;
  SynthSignal signal = SynthSignal::Linear;
  std::uint64_t seed = 0;
};

struct SynthTask {
  /// Distinct feature vectors with rank labels of the noisy latent score (1 = best).
  TaskDataset dataset;
  VectorXd truth;     // noise-free latent score
  VectorXd observed;  // latent score plus noise; the labels rank this
};

SynthTask make_synthetic(const SynthSpec& spec);

/// Path of the ground-truth sidecar written next to a dataset file: `<stem>.truth.csv`.
std::filesystem::path truth_sidecar_path(const std::filesystem::path& dataset_path);

/// Writes the dataset (CSV or JSON by extension) and the `index,score` truth sidecar.
void write_synthetic(const SynthTask& task, const std::filesystem::path& out_path);

}  // namespace gpnas
