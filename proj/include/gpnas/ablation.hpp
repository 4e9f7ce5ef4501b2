#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpnas/config.hpp"
#include "gpnas/dataset.hpp"
#include "gpnas/types.hpp"

namespace gpnas {

struct AblationSpec {
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  double fraction = 0.8;
  /// BO budget for the weighted-kernel rung, run on each training split; 0 keeps the
  /// config's tuned_weights.
  int tune_budget = 0;
  int tune_init = 10;
  /// Optional ground-truth goodness per record; validation tau uses it instead of labels.
  std::optional<VectorXd> truth;
};

struct AblationRow {
  std::string name;
  std::vector<double> taus;  // one per seed
  double mean = 0.0;
  double std = 0.0;
};

/// Validation Kendall tau of each modification rung:
///   GP-NAS (ordinal inputs) -> + feature engineering -> + label transformation
///   -> + ensemble learning -> + weighted ensemble kernel
std::vector<AblationRow> run_ablation(const TaskDataset& ds, const TaskConfig& config, const AblationSpec& spec);

std::string format_ablation(const std::vector<AblationRow>& rows);

}  // namespace gpnas
