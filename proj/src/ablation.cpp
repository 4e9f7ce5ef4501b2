#include "gpnas/ablation.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "gpnas/encoding.hpp"
#include "gpnas/ensemble.hpp"
#include "gpnas/error.hpp"
#include "gpnas/gp.hpp"
#include "gpnas/kendall.hpp"
#include "gpnas/label_transform.hpp"
#include "gpnas/tuner.hpp"

namespace gpnas {

namespace {

VectorXd plain_gp_nas(const TaskDataset& train, const TaskDataset& val, const TaskConfig& config, int encoder_k,
                      const std::optional<ScoreDistribution>& dist) {
  const VectorXd y = training_targets(train, dist);
  MatrixXd X, Xv;
  if (encoder_k == 0) {
    X = train.feature_matrix();
    Xv = val.feature_matrix();
  } else {
    const auto enc = EncoderSpec::for_dataset(train, encoder_k);
    X = encode(train, enc).data;
    Xv = encode(val, enc).data;
  }
  const auto prior = fit_prior_linear(X, y, config.prior_ridge);
  const auto gp = gp_fit(X, y, SqrtRbf<double>{config.kernel_length}, prior, config.sigma_n2);
  return gp_predict(gp, Xv);
}

}  // namespace

std::vector<AblationRow> run_ablation(const TaskDataset& ds, const TaskConfig& config, const AblationSpec& spec) {
  validate(config);
  validate(ds);
  if (!ds.has_labels()) fail(ErrorKind::Data, "ablation data must be fully labelled");
  if (spec.seeds.empty()) fail(ErrorKind::Usage, "ablation needs at least one seed");
  if (spec.truth && spec.truth->size() != ds.size()) fail(ErrorKind::Usage, "truth vector length does not match data");

  const auto dist = config.label_dist ? config.label_dist : std::optional<ScoreDistribution>(NormalScores{});
  const int k = config.encoder_k;

  using Rung = std::function<VectorXd(const TaskDataset&, const TaskDataset&)>;
  std::vector<std::pair<std::string, Rung>> rungs;
  rungs.emplace_back("GP-NAS", [&](const auto& tr, const auto& va) { return plain_gp_nas(tr, va, config, 0, std::nullopt); });
  rungs.emplace_back("+ feature engineering",
                     [&](const auto& tr, const auto& va) { return plain_gp_nas(tr, va, config, k, std::nullopt); });
  rungs.emplace_back("+ label transformation",
                     [&](const auto& tr, const auto& va) { return plain_gp_nas(tr, va, config, k, dist); });
  rungs.emplace_back("+ ensemble learning", [&](const auto& tr, const auto& va) {
    TaskConfig c = config;
    c.label_dist = dist;
    c.beta.reset();
    return ensemble_predict(ensemble_fit(tr, c), va).scores;
  });
  rungs.emplace_back("+ weighted ensemble kernel", [&](const auto& tr, const auto& va) {
    TaskConfig c = config;
    c.label_dist = dist;
    if (spec.tune_budget > 0) {
      TuneSpec ts;
      ts.budget = spec.tune_budget;
      ts.init_points = std::min(spec.tune_init, spec.tune_budget);
      ts.seed = 0;
      c.tuned_weights = tune_weights(tr, c, ts).weights;
    }
    return ensemble_predict(ensemble_fit(tr, c), va).scores;
  });

  std::vector<AblationRow> rows;
  for (const auto& [name, _] : rungs) rows.push_back(AblationRow{name, {}, 0.0, 0.0});
  for (auto seed : spec.seeds) {
    const auto plan = split(ds, spec.fraction, seed);
    const auto train = ds.subset(plan.train_indices);
    const auto val = ds.subset(plan.validation_indices);
    VectorXd truth(val.size());
    if (spec.truth) {
      for (std::size_t i = 0; i < plan.validation_indices.size(); ++i)
        truth[static_cast<Index>(i)] = (*spec.truth)[plan.validation_indices[i]];
    } else {
      truth = val.goodness();
    }
    for (std::size_t r = 0; r < rungs.size(); ++r)
      rows[r].taus.push_back(kendall_tau(rungs[r].second(train, val), truth).tau);
  }
  for (auto& row : rows) {
    const double n = static_cast<double>(row.taus.size());
    double sum = 0.0;
    for (double t : row.taus) sum += t;
    row.mean = sum / n;
    double ss = 0.0;
    for (double t : row.taus) ss += (t - row.mean) * (t - row.mean);
    row.std = row.taus.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return rows;
}

std::string format_ablation(const std::vector<AblationRow>& rows) {
  std::string out = "modification,mean_tau,std_tau,seeds\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%zu\n", r.name.c_str(), r.mean, r.std, r.taus.size());
    out += buf;
  }
  return out;
}

}  // namespace gpnas
