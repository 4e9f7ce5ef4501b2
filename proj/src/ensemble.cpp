#include "gpnas/ensemble.hpp"

#include <string>

#include "gpnas/error.hpp"
#include "gpnas/label_transform.hpp"

namespace gpnas {

namespace {

template <typename F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), stage + ": " + e.what());
  }
}

}  // namespace

int learner_encoder_k(BaseLearner kind, const TaskConfig& config) {
  switch (kind) {
    case BaseLearner::GpNasOneHot: return 1;
    case BaseLearner::GpNasTwoHot: return 2;
    default: return config.encoder_k;
  }
}

VectorXd resolve_weights(const TaskConfig& config, const EncoderSpec& encoder) {
  if (!config.tuned_weights) return VectorXd::Ones(encoder.total_width());
  const VectorXd& w = *config.tuned_weights;
  if (w.size() == static_cast<Index>(encoder.cardinalities.size())) return expand_column_weights(encoder, w);
  if (w.size() == encoder.total_width()) return w;
  fail(ErrorKind::Usage, "tuned_weights has " + std::to_string(w.size()) + " entries; expected " +
                             std::to_string(encoder.cardinalities.size()) + " (per column) or " +
                             std::to_string(encoder.total_width()) + " (per encoded dimension)");
}

KernelSpec<double> final_kernel(const TaskConfig& config, const EncoderSpec& encoder) {
  const SqrtRbf<double> rbf{config.kernel_length};
  if (!config.beta) return rbf;
  EnsembleKernel<double> k;
  k.beta1 = config.beta->first;
  k.beta2 = config.beta->second;
  k.rbf = rbf;
  k.weighted = WeightedRbf<double>{config.kernel_length, resolve_weights(config, encoder)};
  return k;
}

FittedLearner fit_learner(BaseLearner kind, const TaskDataset& ds, const VectorXd& targets, const TaskConfig& config) {
  FittedLearner out{kind, EncoderSpec::for_dataset(ds, learner_encoder_k(kind, config)), KnnModel{}};
  const MatrixXd X = encode(ds, out.encoder).data;
  switch (kind) {
    case BaseLearner::GpNasOneHot:
    case BaseLearner::GpNasTwoHot: {
      const auto prior = fit_prior_linear(X, targets, config.prior_ridge);
      out.model = gp_fit(X, targets, SqrtRbf<double>{config.kernel_length}, prior, config.sigma_n2);
      break;
    }
    case BaseLearner::Knn:
      out.model = knn_fit(X, targets, config.knn.k, config.knn.metric);
      break;
    case BaseLearner::Svr: {
      const double length = config.svr_length > 0.0 ? config.svr_length : config.kernel_length;
      out.model = svr_fit(X, targets, SqrtRbf<double>{length}, config.svr);
      break;
    }
  }
  return out;
}

VectorXd predict_learner(const FittedLearner& learner, const TaskDataset& ds) {
  const MatrixXd X = encode(ds, learner.encoder).data;
  return std::visit(
      [&](const auto& m) -> VectorXd {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, GpModel<double>>)
          return gp_predict(m, X);
        else if constexpr (std::is_same_v<M, KnnModel>)
          return knn_predict(m, X);
        else
          return svr_predict(m, X);
      },
      learner.model);
}

namespace {

VectorXd learner_mean(const std::vector<FittedLearner>& learners, const TaskDataset& ds) {
  VectorXd sum = VectorXd::Zero(ds.size());
  for (const auto& l : learners)
    sum += staged(std::string("predict ") + to_string(l.kind), [&] { return predict_learner(l, ds); });
  return sum / static_cast<double>(learners.size());
}

}  // namespace

EnsembleModel ensemble_fit(const TaskDataset& ds, const TaskConfig& config) {
  staged("config", [&] { validate(config); });
  staged("dataset", [&] {
    validate(ds);
    if (!ds.has_labels()) fail(ErrorKind::Data, "training data must be fully labelled");
  });

  const VectorXd targets = staged("label transform", [&] { return training_targets(ds, config.label_dist); });

  EnsembleModel model;
  model.config = config;
  model.cardinalities = ds.cardinalities;
  for (BaseLearner kind : config.base_learners)
    model.learners.push_back(
        staged(std::string("fit ") + to_string(kind), [&] { return fit_learner(kind, ds, targets, config); }));

  const VectorXd prior = learner_mean(model.learners, ds);
  staged("final GP", [&] {
    model.final_encoder = EncoderSpec::for_dataset(ds, config.encoder_k);
    const MatrixXd X = encode(ds, model.final_encoder).data;
    model.final_gp = gp_fit(X, targets, final_kernel(config, model.final_encoder),
                            ExternalPrior{"base-learner mean"}, config.sigma_n2, prior);
  });
  return model;
}

void check_compatible(const EnsembleModel& model, const TaskDataset& test) {
  if (test.dim() != static_cast<Index>(model.cardinalities.size()))
    fail(ErrorKind::Data, "prediction data has " + std::to_string(test.dim()) + " columns, model expects " +
                              std::to_string(model.cardinalities.size()));
}

EnsemblePrediction ensemble_predict(const EnsembleModel& model, const TaskDataset& test) {
  check_compatible(model, test);
  EnsemblePrediction out;
  out.prior = learner_mean(model.learners, test);
  staged("final GP", [&] {
    const MatrixXd X = encode(test, model.final_encoder).data;
    out.correction = gp_correction(model.final_gp, X);
  });
  out.scores = out.prior + out.correction;
  out.ranks = scores_to_ranks(out.scores);
  return out;
}

}  // namespace gpnas
