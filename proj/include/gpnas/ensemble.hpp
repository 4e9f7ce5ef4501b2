#pragma once

// Ensemble predictor:
//   1. targets   ranks -> scores (label transform)
//   2. learners  GP-NAS on one-hot / two-hot inputs (linear prior, square-root RBF), KNN, SVR
//   3. training  each learner on the full training set
//   4. final GP  ensemble kernel over the configured k-hot encoding, prior mean = average of
//                the learners' predictions

#include <variant>
#include <vector>

#include "gpnas/config.hpp"
#include "gpnas/dataset.hpp"
#include "gpnas/encoding.hpp"
#include "gpnas/gp.hpp"
#include "gpnas/knn.hpp"
#include "gpnas/svr.hpp"

namespace gpnas {

struct FittedLearner {
  BaseLearner kind;
  EncoderSpec encoder;
  std::variant<GpModel<double>, KnnModel, SvrModel> model;
};

struct EnsembleModel {
  TaskConfig config;
  std::vector<int> cardinalities;
  std::vector<FittedLearner> learners;
  EncoderSpec final_encoder;
  GpModel<double> final_gp;
};

struct EnsemblePrediction {
  VectorXd scores;
  VectorXi ranks;
  VectorXd prior;       // average of the learners' predictions
  VectorXd correction;  // GP posterior correction; scores = prior + correction
};

/// Encoder k used by each learner kind under a config.
int learner_encoder_k(BaseLearner kind, const TaskConfig& config);

/// Kernel of the final GP for a config over an encoder layout.
KernelSpec<double> final_kernel(const TaskConfig& config, const EncoderSpec& encoder);

/// Per-encoded-dimension weights from config.tuned_weights (ones when absent).
VectorXd resolve_weights(const TaskConfig& config, const EncoderSpec& encoder);

FittedLearner fit_learner(BaseLearner kind, const TaskDataset& ds, const VectorXd& targets, const TaskConfig& config);
VectorXd predict_learner(const FittedLearner& learner, const TaskDataset& ds);

/// Errors from any stage are rethrown with the stage name prefixed.
EnsembleModel ensemble_fit(const TaskDataset& ds, const TaskConfig& config);
EnsemblePrediction ensemble_predict(const EnsembleModel& model, const TaskDataset& test);

/// Schema check of a prediction set against the trained model's columns.
void check_compatible(const EnsembleModel& model, const TaskDataset& test);

}  // namespace gpnas
