#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gpnas/knn.hpp"
#include "gpnas/label_transform.hpp"
#include "gpnas/svr.hpp"
#include "gpnas/types.hpp"

namespace gpnas {

enum class BaseLearner { GpNasOneHot, GpNasTwoHot, Knn, Svr };

const char* to_string(BaseLearner learner);
BaseLearner base_learner_from_string(const std::string& s);

struct KnnParams {
  int k = 5;
  KnnMetric metric = KnnMetric::Euclidean;
};

/// Per-task pipeline configuration.
struct TaskConfig {
  std::string name = "custom";
  double kernel_length = 22.0;
  /// (beta1, beta2) for the final ensemble kernel; absent means plain square-root RBF.
  std::optional<std::pair<double, double>> beta;
  /// Absent means targets are used as-is (-rank or score).
  std::optional<ScoreDistribution> label_dist = NormalScores{};
  std::vector<BaseLearner> base_learners = {BaseLearner::GpNasOneHot, BaseLearner::GpNasTwoHot};
  /// k-hot width for KNN, SVR and the final GP.
  int encoder_k = 2;
  /// One weight per original column or per encoded dimension; absent means all ones.
  std::optional<VectorXd> tuned_weights;
  double sigma_n2 = 1e-6;
  double prior_ridge = 1e-3;
  KnnParams knn;
  SvrParams svr;
  /// SVR kernel length; non-positive means kernel_length.
  double svr_length = 0.0;
};

void validate(const TaskConfig& config);

/// Names of the shipped per-task presets: task0 .. task7.
std::vector<std::string> preset_names();
TaskConfig preset(const std::string& name);
/// A preset name or a path to a JSON config file.
TaskConfig resolve_config(const std::string& name_or_path);

nlohmann::json to_json(const TaskConfig& config);
TaskConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ScoreDistribution& dist);
ScoreDistribution score_distribution_from_json(const nlohmann::json& j);

}  // namespace gpnas
