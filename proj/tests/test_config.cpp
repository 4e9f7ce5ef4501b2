#include <doctest.h>

#include "gpnas/config.hpp"
#include "gpnas/error.hpp"

using namespace gpnas;

TEST_CASE("presets carry the per-task settings") {
  CHECK(preset_names().size() == 8);
  const auto t0 = preset("task0");
  CHECK(t0.kernel_length == 22.0);
  REQUIRE(t0.beta.has_value());
  CHECK(t0.beta->first == 0.18);
  CHECK(t0.beta->second == 0.82);
  CHECK(std::holds_alternative<NormalScores>(*t0.label_dist));
  CHECK(t0.base_learners ==
        std::vector<BaseLearner>{BaseLearner::GpNasOneHot, BaseLearner::GpNasTwoHot, BaseLearner::Knn});

  const auto t1 = preset("task1");
  CHECK(t1.kernel_length == 28.0);
  CHECK(std::holds_alternative<LeftSkewedScores>(*t1.label_dist));
  CHECK(t1.base_learners.back() == BaseLearner::Svr);

  CHECK(preset("task2").beta->first == 0.02);
  CHECK(preset("task3").kernel_length == 25.0);

  const auto t6 = preset("task6");
  CHECK_FALSE(t6.beta.has_value());
  CHECK(t6.encoder_k == 9);
  CHECK(t6.base_learners == std::vector<BaseLearner>{BaseLearner::GpNasOneHot, BaseLearner::GpNasTwoHot});
}

TEST_CASE("config json round trip") {
  for (const auto& name : preset_names()) {
    auto c = preset(name);
    c.tuned_weights = VectorXd::LinSpaced(4, 0.1, 0.9);
    const auto back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
  }
}

TEST_CASE("json config can start from a preset") {
  const auto c = config_from_json(nlohmann::json::parse(R"({"base": "task1", "kernel_length": 30})"));
  CHECK(c.kernel_length == 30.0);
  CHECK(c.beta->first == 0.62);
}

TEST_CASE("invalid configs are usage errors") {
  CHECK_THROWS_AS(preset("task9"), Error);
  auto c = preset("task0");
  c.kernel_length = -1.0;
  CHECK_THROWS_AS(validate(c), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"beta": [1]})")), Error);
  CHECK_THROWS_AS(resolve_config("/nonexistent/config.json"), Error);
}
