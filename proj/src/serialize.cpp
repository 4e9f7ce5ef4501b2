#include "gpnas/serialize.hpp"

#include <string>
#include <vector>

#include "gpnas/dataset.hpp"
#include "gpnas/error.hpp"

namespace gpnas {

using json = nlohmann::json;

namespace {

json vec_json(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

VectorXd vec_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(v.size()));
}

json mat_json(const MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    const VectorXd r = m.row(i).transpose();
    rows.push_back(vec_json(r));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

MatrixXd mat_from(const json& j) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto& data = j.at("data");
  if (static_cast<Index>(data.size()) != rows) fail(ErrorKind::Data, "matrix row count mismatch");
  MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto r = data.at(static_cast<std::size_t>(i)).get<std::vector<double>>();
    if (static_cast<Index>(r.size()) != cols) fail(ErrorKind::Data, "matrix column count mismatch");
    for (Index c = 0; c < cols; ++c) m(i, c) = r[static_cast<std::size_t>(c)];
  }
  return m;
}

json prior_json(const PriorMean<double>& prior) {
  if (const auto* lin = std::get_if<LinearPrior<double>>(&prior))
    return {{"kind", "linear"}, {"weights", vec_json(lin->weights)}, {"bias", lin->bias}};
  return {{"kind", "external"}, {"source", std::get<ExternalPrior>(prior).source}};
}

PriorMean<double> prior_from(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "linear") return LinearPrior<double>{vec_from(j.at("weights")), j.at("bias").get<double>()};
  if (kind == "external") return ExternalPrior{j.at("source").get<std::string>()};
  fail(ErrorKind::Data, "unknown prior kind '" + kind + "'");
}

json svr_params_json(const SvrParams& p) {
  return {{"C", p.C}, {"epsilon", p.epsilon}, {"tol", p.tol}, {"max_iter", p.max_iter}};
}

SvrParams svr_params_from(const json& j) {
  return SvrParams{j.at("C").get<double>(), j.at("epsilon").get<double>(), j.at("tol").get<double>(),
                   j.at("max_iter").get<int>()};
}

json learner_json(const FittedLearner& l) {
  json j{{"kind", to_string(l.kind)}, {"encoder", to_json(l.encoder)}};
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, GpModel<double>>) {
          j["model"] = to_json(m);
        } else if constexpr (std::is_same_v<M, KnnModel>) {
          j["model"] = {{"X", mat_json(m.X_train)}, {"y", vec_json(m.y_train)}, {"k", m.k}, {"metric", to_string(m.metric)}};
        } else {
          j["model"] = {{"X", mat_json(m.X_train)}, {"coef", vec_json(m.coef)},  {"bias", m.bias},
                        {"kernel", to_json(m.kernel)}, {"params", svr_params_json(m.params)}, {"converged", m.converged}};
        }
      },
      l.model);
  return j;
}

FittedLearner learner_from(const json& j) {
  FittedLearner l{base_learner_from_string(j.at("kind").get<std::string>()), encoder_from_json(j.at("encoder")),
                  KnnModel{}};
  const auto& m = j.at("model");
  switch (l.kind) {
    case BaseLearner::GpNasOneHot:
    case BaseLearner::GpNasTwoHot:
      l.model = gp_from_json(m);
      break;
    case BaseLearner::Knn:
      l.model = knn_fit(mat_from(m.at("X")), vec_from(m.at("y")), m.at("k").get<int>(),
                        knn_metric_from_string(m.at("metric").get<std::string>()));
      break;
    case BaseLearner::Svr: {
      SvrModel s;
      s.X_train = mat_from(m.at("X"));
      s.coef = vec_from(m.at("coef"));
      s.bias = m.at("bias").get<double>();
      s.kernel = kernel_from_json(m.at("kernel"));
      s.params = svr_params_from(m.at("params"));
      s.converged = m.at("converged").get<bool>();
      if (s.coef.size() != s.X_train.rows()) fail(ErrorKind::Data, "SVR coefficient count mismatch");
      l.model = std::move(s);
      break;
    }
  }
  return l;
}

}  // namespace

json to_json(const KernelSpec<double>& kernel) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, SqrtRbf<double>>) {
          return {{"kind", "sqrt_rbf"}, {"length", k.length}};
        } else if constexpr (std::is_same_v<K, WeightedRbf<double>>) {
          return {{"kind", "weighted"}, {"length", k.length}, {"weights", vec_json(k.weights)}};
        } else {
          return {{"kind", "ensemble"},
                  {"beta1", k.beta1},
                  {"beta2", k.beta2},
                  {"rbf", to_json(KernelSpec<double>{k.rbf})},
                  {"weighted", to_json(KernelSpec<double>{k.weighted})}};
        }
      },
      kernel);
}

KernelSpec<double> kernel_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  KernelSpec<double> out;
  if (kind == "sqrt_rbf") {
    out = SqrtRbf<double>{j.at("length").get<double>()};
  } else if (kind == "weighted") {
    out = WeightedRbf<double>{j.at("length").get<double>(), vec_from(j.at("weights"))};
  } else if (kind == "ensemble") {
    EnsembleKernel<double> e;
    e.beta1 = j.at("beta1").get<double>();
    e.beta2 = j.at("beta2").get<double>();
    e.rbf = std::get<SqrtRbf<double>>(kernel_from_json(j.at("rbf")));
    e.weighted = std::get<WeightedRbf<double>>(kernel_from_json(j.at("weighted")));
    out = e;
  } else {
    fail(ErrorKind::Data, "unknown kernel kind '" + kind + "'");
  }
  validate(out);
  return out;
}

json to_json(const EncoderSpec& spec) { return {{"k", spec.k}, {"cardinalities", spec.cardinalities}}; }

EncoderSpec encoder_from_json(const json& j) {
  EncoderSpec spec{j.at("k").get<int>(), j.at("cardinalities").get<std::vector<int>>()};
  validate(spec);
  return spec;
}

json to_json(const GpModel<double>& gp) {
  return {{"X", mat_json(gp.train_inputs())},
          {"residuals", vec_json(gp.residuals())},
          {"dual", vec_json(gp.dual())},
          {"kernel", to_json(gp.kernel())},
          {"prior", prior_json(gp.prior())},
          {"sigma_n2", gp.noise_variance()},
          {"jitter", gp.jitter_used()}};
}

GpModel<double> gp_from_json(const json& j) {
  MatrixXd X = mat_from(j.at("X"));
  VectorXd residuals = vec_from(j.at("residuals"));
  if (residuals.size() != X.rows()) fail(ErrorKind::Data, "GP residual count mismatch");
  return GpModel<double>::restore(std::move(X), std::move(residuals), kernel_from_json(j.at("kernel")),
                                  prior_from(j.at("prior")), j.at("sigma_n2").get<double>(),
                                  j.at("jitter").get<double>());
}

json to_json(const EnsembleModel& model) {
  json learners = json::array();
  for (const auto& l : model.learners) learners.push_back(learner_json(l));
  return {{"format", kModelFormat},
          {"version", std::to_string(kModelMajorVersion) + "." + std::to_string(kModelMinorVersion)},
          {"config", to_json(model.config)},
          {"cardinalities", model.cardinalities},
          {"learners", std::move(learners)},
          {"final", {{"encoder", to_json(model.final_encoder)}, {"gp", to_json(model.final_gp)}}}};
}

EnsembleModel model_from_json(const json& j) {
  try {
    if (j.value("format", std::string()) != kModelFormat) fail(ErrorKind::Data, "not a gpnas ensemble model file");
    const auto version = j.at("version").get<std::string>();
    int major = 0;
    try {
      major = std::stoi(version.substr(0, version.find('.')));
    } catch (const std::exception&) {
      fail(ErrorKind::Data, "malformed model version '" + version + "'");
    }
    if (major > kModelMajorVersion)
      fail(ErrorKind::Data, "model file version " + version + " is newer than supported major version " +
                                std::to_string(kModelMajorVersion));
    EnsembleModel model;
    model.config = config_from_json(j.at("config"));
    model.cardinalities = j.at("cardinalities").get<std::vector<int>>();
    for (const auto& l : j.at("learners")) model.learners.push_back(learner_from(l));
    if (model.learners.empty()) fail(ErrorKind::Data, "model has no base learners");
    model.final_encoder = encoder_from_json(j.at("final").at("encoder"));
    model.final_gp = gp_from_json(j.at("final").at("gp"));
    return model;
  } catch (const json::exception& e) {
    fail(ErrorKind::Data, std::string("model file does not match schema: ") + e.what());
  }
}

std::string serialize_model(const EnsembleModel& model) { return to_json(model).dump(1) + "\n"; }

EnsembleModel deserialize_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Data, std::string("malformed model JSON: ") + e.what());
  }
  return model_from_json(j);
}

void save_model(const EnsembleModel& model, const std::filesystem::path& path) {
  write_text_file(path, serialize_model(model));
}

EnsembleModel load_model(const std::filesystem::path& path) { return deserialize_model(read_text_file(path)); }

}  // namespace gpnas
