#include <doctest.h>

#include "gpnas/ensemble.hpp"
#include "gpnas/kendall.hpp"
#include "gpnas/label_transform.hpp"
#include "gpnas/serialize.hpp"
#include "gpnas/synth.hpp"

using namespace gpnas;

namespace {

SynthTask linear_task(int n, std::uint64_t seed, double noise = 0.0) {
  SynthSpec s;
  s.n = n;
  s.seed = seed;
  s.noise = noise;
  return make_synthetic(s);
}

}  // namespace

TEST_CASE("task-0 preset interpolates its training set") {
  const auto task = linear_task(40, 1);
  const auto m = ensemble_fit(task.dataset, preset("task0"));
  CHECK(m.learners.size() == 3);
  const auto p = ensemble_predict(m, task.dataset);
  CHECK(kendall_tau(p.scores, task.dataset.goodness()).tau == 1.0);
  CHECK((p.scores - (p.prior + p.correction)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("prior is the average of the learners") {
  const auto task = linear_task(50, 2);
  const auto config = preset("task1");
  const auto m = ensemble_fit(task.dataset, config);
  const auto test = linear_task(20, 3).dataset;
  VectorXd avg = VectorXd::Zero(test.size());
  for (const auto& l : m.learners) avg += predict_learner(l, test);
  avg /= static_cast<double>(m.learners.size());
  CHECK((ensemble_predict(m, test).prior - avg).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("task-6 preset uses nine-hot final inputs and a plain kernel") {
  const auto task = linear_task(40, 4);
  const auto m = ensemble_fit(task.dataset, preset("task6"));
  CHECK(m.final_encoder.k == 9);
  CHECK(m.final_encoder.total_width() == 8 * (3 + 8));
  CHECK(std::holds_alternative<SqrtRbf<double>>(m.final_gp.kernel()));
  CHECK(m.learners.size() == 2);
}

TEST_CASE("single learner with beta (1, 0) reduces to that learner as prior") {
  const auto task = linear_task(40, 5);
  auto config = preset("task0");
  config.base_learners = {BaseLearner::GpNasTwoHot};
  config.beta = std::make_pair(1.0, 0.0);
  const auto m = ensemble_fit(task.dataset, config);
  const auto test = linear_task(15, 6).dataset;
  const auto p = ensemble_predict(m, test);
  CHECK((p.prior - predict_learner(m.learners[0], test)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rescaling score labels leaves predicted ranks unchanged") {
  auto ds = linear_task(40, 7).dataset;
  ds.label_kind = LabelKind::Score;
  for (auto& r : ds.records) r.label = -*r.label;
  auto scaled = ds;
  for (auto& r : scaled.records) r.label = 4.0 * *r.label;
  auto config = preset("task0");
  config.base_learners = {BaseLearner::GpNasOneHot, BaseLearner::GpNasTwoHot};
  config.sigma_n2 = 0.0;
  config.prior_ridge = 0.0;
  const auto test = linear_task(25, 8).dataset;
  const auto a = ensemble_predict(ensemble_fit(ds, config), test);
  const auto b = ensemble_predict(ensemble_fit(scaled, config), test);
  CHECK(a.ranks == b.ranks);
  CHECK((4.0 * a.scores - b.scores).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("constant labels give constant predictions") {
  auto ds = linear_task(30, 9).dataset;
  ds.label_kind = LabelKind::Score;
  for (auto& r : ds.records) r.label = 0.7;
  auto config = preset("task3");
  config.label_dist.reset();
  const auto p = ensemble_predict(ensemble_fit(ds, config), linear_task(10, 10).dataset);
  CHECK((p.scores.array() - 0.7).abs().maxCoeff() < 1e-6);
}

TEST_CASE("fitting is deterministic and serialization round-trips") {
  const auto task = linear_task(60, 11, 0.1);
  const auto config = preset("task4");
  const auto a = ensemble_fit(task.dataset, config);
  const auto b = ensemble_fit(task.dataset, config);
  const std::string text = serialize_model(a);
  CHECK(text == serialize_model(b));
  const auto restored = deserialize_model(text);
  CHECK(serialize_model(restored) == text);
  const auto test = linear_task(20, 12).dataset;
  CHECK(ensemble_predict(restored, test).scores == ensemble_predict(a, test).scores);
}

TEST_CASE("newer model versions are rejected") {
  const auto m = ensemble_fit(linear_task(30, 13).dataset, preset("task0"));
  auto j = nlohmann::json::parse(serialize_model(m));
  j["version"] = "2.0";
  CHECK_THROWS_AS(deserialize_model(j.dump()), Error);
  j["version"] = "1.7";
  CHECK_NOTHROW(deserialize_model(j.dump()));
  j["format"] = "something-else";
  CHECK_THROWS_AS(deserialize_model(j.dump()), Error);
}

TEST_CASE("prediction input must match the training columns") {
  const auto m = ensemble_fit(linear_task(30, 14).dataset, preset("task0"));
  SynthSpec s;
  s.n = 10;
  s.dim = 5;
  CHECK_THROWS_AS(ensemble_predict(m, make_synthetic(s).dataset), Error);
}

TEST_CASE("noiseless held-out half is ranked well") {
  const auto task = linear_task(200, 15);
  const auto plan = split(task.dataset, 0.5, 15);
  const auto m = ensemble_fit(task.dataset.subset(plan.train_indices), TaskConfig{});
  const auto val = task.dataset.subset(plan.validation_indices);
  CHECK(kendall_tau(ensemble_predict(m, val).scores, val.goodness()).tau >= 0.9);
}

TEST_CASE("training inputs reproduce training ranks") {
  const auto task = linear_task(80, 16);
  const auto m = ensemble_fit(task.dataset, preset("task5"));
  const auto p = ensemble_predict(m, task.dataset);
  VectorXi ranks(task.dataset.size());
  for (Index i = 0; i < ranks.size(); ++i) ranks[i] = static_cast<int>(*task.dataset.records[i].label);
  CHECK(p.ranks == ranks);
  const VectorXd targets = training_targets(task.dataset, m.config.label_dist);
  CHECK((p.scores - targets).cwiseAbs().maxCoeff() < 1e-4);
}
