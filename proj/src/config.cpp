#include "gpnas/config.hpp"

#include <filesystem>

#include "gpnas/dataset.hpp"
#include "gpnas/error.hpp"

namespace gpnas {

using json = nlohmann::json;

const char* to_string(BaseLearner learner) {
  switch (learner) {
    case BaseLearner::GpNasOneHot: return "gp_nas_one_hot";
    case BaseLearner::GpNasTwoHot: return "gp_nas_two_hot";
    case BaseLearner::Knn: return "knn";
    case BaseLearner::Svr: return "svr";
  }
  return "?";
}

BaseLearner base_learner_from_string(const std::string& s) {
  for (auto b : {BaseLearner::GpNasOneHot, BaseLearner::GpNasTwoHot, BaseLearner::Knn, BaseLearner::Svr})
    if (s == to_string(b)) return b;
  fail(ErrorKind::Usage, "unknown base learner '" + s + "'");
}

void validate(const TaskConfig& c) {
  if (!(c.kernel_length > 0.0)) fail(ErrorKind::Usage, "config: kernel_length must be positive");
  if (c.beta) {
    const auto [b1, b2] = *c.beta;
    if (!(b1 >= 0.0 && b2 >= 0.0 && b1 + b2 > 0.0))
      fail(ErrorKind::Usage, "config: beta must be non-negative with positive sum");
  }
  if (c.label_dist) validate(*c.label_dist);
  if (c.base_learners.empty()) fail(ErrorKind::Usage, "config: base_learners must be non-empty");
  if (c.encoder_k < 1) fail(ErrorKind::Usage, "config: encoder_k must be >= 1");
  if (c.tuned_weights && (c.tuned_weights->array() < 0.0).any())
    fail(ErrorKind::Usage, "config: tuned_weights must be non-negative");
  if (!(c.sigma_n2 >= 0.0)) fail(ErrorKind::Usage, "config: sigma_n2 must be non-negative");
  if (!(c.prior_ridge >= 0.0)) fail(ErrorKind::Usage, "config: prior_ridge must be non-negative");
  if (c.knn.k < 1) fail(ErrorKind::Usage, "config: knn.k must be >= 1");
  if (!(c.svr.C > 0.0) || !(c.svr.epsilon >= 0.0) || !(c.svr.tol > 0.0) || c.svr.max_iter < 1)
    fail(ErrorKind::Usage, "config: invalid SVR parameters");
}

std::vector<std::string> preset_names() {
  return {"task0", "task1", "task2", "task3", "task4", "task5", "task6", "task7"};
}

TaskConfig preset(const std::string& name) {
  struct Row {
    double length;
    std::optional<std::pair<double, double>> beta;
    bool left_skewed;
    BaseLearner extra;
    bool gp_only;
  };
  static const Row rows[] = {
      {22, std::pair{0.18, 0.82}, false, BaseLearner::Knn, false},
      {28, std::pair{0.62, 0.38}, true, BaseLearner::Svr, false},
      {24, std::pair{0.02, 0.98}, true, BaseLearner::Svr, false},
      {25, std::pair{0.6, 0.4}, false, BaseLearner::Svr, false},
      {22, std::pair{0.7, 0.3}, true, BaseLearner::Svr, false},
      {22, std::pair{0.3, 0.7}, false, BaseLearner::Svr, false},
      {22, std::nullopt, false, BaseLearner::Svr, true},
      {22, std::pair{0.3, 0.7}, false, BaseLearner::Svr, false},
  };
  const auto names = preset_names();
  for (std::size_t t = 0; t < names.size(); ++t) {
    if (names[t] != name) continue;
    const Row& r = rows[t];
    TaskConfig c;
    c.name = name;
    c.kernel_length = r.length;
    c.beta = r.beta;
    if (r.left_skewed)
      c.label_dist = LeftSkewedScores{};
    else
      c.label_dist = NormalScores{};
    c.base_learners = {BaseLearner::GpNasOneHot, BaseLearner::GpNasTwoHot};
    if (!r.gp_only) c.base_learners.push_back(r.extra);
    c.encoder_k = r.gp_only ? 9 : 2;
    return c;
  }
  fail(ErrorKind::Usage, "unknown preset '" + name + "'");
}

TaskConfig resolve_config(const std::string& name_or_path) {
  for (const auto& n : preset_names())
    if (n == name_or_path) return preset(n);
  if (!std::filesystem::exists(name_or_path))
    fail(ErrorKind::Usage, "config '" + name_or_path + "' is neither a preset nor an existing file");
  json j;
  try {
    j = json::parse(read_text_file(name_or_path));
  } catch (const json::exception& e) {
    fail(ErrorKind::Usage, std::string("malformed config JSON: ") + e.what());
  }
  return config_from_json(j);
}

json to_json(const ScoreDistribution& dist) {
  if (const auto* n = std::get_if<NormalScores>(&dist)) return {{"kind", "normal"}, {"mu", n->mu}, {"sigma", n->sigma}};
  const auto& s = std::get<LeftSkewedScores>(dist);
  return {{"kind", "left_skewed"}, {"location", s.location}, {"scale", s.scale}, {"shape", s.shape}};
}

ScoreDistribution score_distribution_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "normal") return NormalScores{j.value("mu", 0.0), j.value("sigma", 1.0)};
  if (kind == "left_skewed")
    return LeftSkewedScores{j.value("location", 0.0), j.value("scale", 1.0), j.value("shape", -4.0)};
  fail(ErrorKind::Usage, "unknown label distribution '" + kind + "'");
}

json to_json(const TaskConfig& c) {
  json j;
  j["name"] = c.name;
  j["kernel_length"] = c.kernel_length;
  j["beta"] = c.beta ? json::array({c.beta->first, c.beta->second}) : json(nullptr);
  j["label_transform"] = c.label_dist ? to_json(*c.label_dist) : json{{"kind", "none"}};
  json learners = json::array();
  for (auto b : c.base_learners) learners.push_back(to_string(b));
  j["base_learners"] = std::move(learners);
  j["encoder_k"] = c.encoder_k;
  if (c.tuned_weights)
    j["tuned_weights"] = std::vector<double>(c.tuned_weights->data(), c.tuned_weights->data() + c.tuned_weights->size());
  else
    j["tuned_weights"] = nullptr;
  j["sigma_n2"] = c.sigma_n2;
  j["prior_ridge"] = c.prior_ridge;
  j["knn"] = {{"k", c.knn.k}, {"metric", to_string(c.knn.metric)}};
  j["svr"] = {{"C", c.svr.C},
              {"epsilon", c.svr.epsilon},
              {"tol", c.svr.tol},
              {"max_iter", c.svr.max_iter},
              {"length", c.svr_length}};
  return j;
}

TaskConfig config_from_json(const json& j) {
  try {
    TaskConfig c;
    if (j.contains("base")) c = preset(j.at("base").get<std::string>());
    c.name = j.value("name", c.name);
    c.kernel_length = j.value("kernel_length", c.kernel_length);
    if (j.contains("beta")) {
      if (j.at("beta").is_null()) {
        c.beta.reset();
      } else {
        const auto b = j.at("beta").get<std::vector<double>>();
        if (b.size() != 2) fail(ErrorKind::Usage, "config: beta must have two entries");
        c.beta = std::pair{b[0], b[1]};
      }
    }
    if (j.contains("label_transform")) {
      const auto& lt = j.at("label_transform");
      if (lt.at("kind").get<std::string>() == "none")
        c.label_dist.reset();
      else
        c.label_dist = score_distribution_from_json(lt);
    }
    if (j.contains("base_learners")) {
      c.base_learners.clear();
      for (const auto& b : j.at("base_learners")) c.base_learners.push_back(base_learner_from_string(b.get<std::string>()));
    }
    c.encoder_k = j.value("encoder_k", c.encoder_k);
    if (j.contains("tuned_weights")) {
      if (j.at("tuned_weights").is_null()) {
        c.tuned_weights.reset();
      } else {
        const auto w = j.at("tuned_weights").get<std::vector<double>>();
        c.tuned_weights = Eigen::Map<const VectorXd>(w.data(), static_cast<Index>(w.size()));
      }
    }
    c.sigma_n2 = j.value("sigma_n2", c.sigma_n2);
    c.prior_ridge = j.value("prior_ridge", c.prior_ridge);
    if (j.contains("knn")) {
      const auto& k = j.at("knn");
      c.knn.k = k.value("k", c.knn.k);
      if (k.contains("metric")) c.knn.metric = knn_metric_from_string(k.at("metric").get<std::string>());
    }
    if (j.contains("svr")) {
      const auto& s = j.at("svr");
      c.svr.C = s.value("C", c.svr.C);
      c.svr.epsilon = s.value("epsilon", c.svr.epsilon);
      c.svr.tol = s.value("tol", c.svr.tol);
      c.svr.max_iter = s.value("max_iter", c.svr.max_iter);
      c.svr_length = s.value("length", c.svr_length);
    }
    validate(c);
    return c;
  } catch (const json::exception& e) {
    fail(ErrorKind::Usage, std::string("config JSON does not match schema: ") + e.what());
  }
}

}  // namespace gpnas
