// gpnas: command-line front end for the GP-NAS ensemble predictor.
//
//   gpnas synth    --n 200 --dim 8 --cardinality 4 --noise 0 --seed 1 --out task.csv
//   gpnas train    --data task.csv --config task0 --out model.json
//   gpnas tune     --data task.csv --config task0 --budget 60 --seed 0 --out tuned.json
//   gpnas predict  --model model.json --data test.csv --out preds.csv
//   gpnas evaluate --pred preds.csv --truth task.truth.csv
//   gpnas ablate   --data task.csv --config task0 --seeds 5
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error. Failures print a
// single line `<CODE>: <message>` on stderr.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpnas/ablation.hpp"
#include "gpnas/config.hpp"
#include "gpnas/dataset.hpp"
#include "gpnas/ensemble.hpp"
#include "gpnas/error.hpp"
#include "gpnas/kendall.hpp"
#include "gpnas/serialize.hpp"
#include "gpnas/synth.hpp"
#include "gpnas/tuner.hpp"

namespace {

using namespace gpnas;

struct DataOptions {
  std::string path;
  std::string cardinalities;
  std::string label_kind = "rank";
};

void add_data_options(CLI::App* cmd, DataOptions& opts) {
  cmd->add_option("--data", opts.path, "Dataset file (.csv or .json)")->required();
  cmd->add_option("--cardinalities", opts.cardinalities, "Declared per-column cardinalities, comma separated");
  cmd->add_option("--label-kind", opts.label_kind, "Label kind for CSV input")->check(CLI::IsMember({"rank", "score"}));
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      fail(ErrorKind::Usage, "malformed integer list '" + s + "'");
    }
  }
  return out;
}

TaskDataset load(const DataOptions& opts) {
  DatasetSchema schema;
  schema.label_kind = label_kind_from_string(opts.label_kind);
  if (!opts.cardinalities.empty()) schema.cardinalities = parse_int_list(opts.cardinalities);
  return load_dataset(opts.path, schema);
}

/// Larger-is-better values from a predictions/truth table or a dataset file, in index order.
VectorXd read_goodness(const std::string& path, LabelKind dataset_kind) {
  if (std::filesystem::path(path).extension() == ".json") {
    DatasetSchema schema;
    schema.label_kind = dataset_kind;
    return load_dataset(path, schema).goodness();
  }
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Data, "'" + path + "' is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (!header.empty() && header.front() == "f0") {
    DatasetSchema schema;
    schema.label_kind = dataset_kind;
    return parse_csv_dataset(text, schema).goodness();
  }
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };
  const auto score_col = column("score");
  const auto rank_col = column("rank");
  const auto index_col = column("index");
  if (!score_col && !rank_col) fail(ErrorKind::Data, "'" + path + "' has neither a score nor a rank column");

  std::map<long, double> by_index;
  long row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) fail(ErrorKind::Data, "'" + path + "': ragged row " + std::to_string(row + 1));
    try {
      const long idx = index_col ? std::stol(cells[*index_col]) : row;
      const double v = score_col ? std::stod(cells[*score_col]) : -std::stod(cells[*rank_col]);
      if (!by_index.emplace(idx, v).second) fail(ErrorKind::Data, "'" + path + "': duplicate index");
    } catch (const std::logic_error&) {
      fail(ErrorKind::Data, "'" + path + "': malformed number in row " + std::to_string(row + 1));
    }
    ++row;
  }
  VectorXd out(static_cast<Index>(by_index.size()));
  Index i = 0;
  for (const auto& [idx, v] : by_index) out[i++] = v;
  return out;
}

std::string predictions_csv(const EnsemblePrediction& p) {
  std::string out = "index,score,rank\n";
  for (Index i = 0; i < p.scores.size(); ++i)
    out += std::to_string(i) + "," + format_double(p.scores[i]) + "," + std::to_string(p.ranks[i]) + "\n";
  return out;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return 2;
    case ErrorKind::Data: return 3;
    case ErrorKind::Numerical: return 4;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GP-NAS ensemble: small-sample architecture performance prediction"};
  app.require_subcommand(1);

  // synth
  SynthSpec synth;
  std::string synth_signal = "linear";
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic task and its ground-truth sidecar");
  synth_cmd->add_option("--n", synth.n, "Number of architectures")->capture_default_str();
  synth_cmd->add_option("--dim", synth.dim, "Number of ordinal columns")->capture_default_str();
  synth_cmd->add_option("--cardinality", synth.cardinality, "Categories per column")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Noise std as a fraction of signal std")->capture_default_str();
  synth_cmd->add_option("--interaction", synth.interaction, "Weight of the x0*x1 term")->capture_default_str();
  synth_cmd->add_option("--signal", synth_signal, "linear | planted")->check(CLI::IsMember({"linear", "planted"}));
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Dataset path (.csv or .json)")->required();

  // train
  DataOptions train_data;
  std::string train_config = "task0", train_out;
  auto* train_cmd = app.add_subcommand("train", "Fit an ensemble model");
  add_data_options(train_cmd, train_data);
  train_cmd->add_option("--config", train_config, "Preset name (task0..task7) or config JSON path")->capture_default_str();
  train_cmd->add_option("--out", train_out, "Model file")->required();

  // tune
  DataOptions tune_data;
  std::string tune_config = "task0", tune_out, tune_trace, tune_objective = "validation";
  TuneSpec tune_spec;
  auto* tune_cmd = app.add_subcommand("tune", "Tune weighted-kernel weights by Bayesian optimization");
  add_data_options(tune_cmd, tune_data);
  tune_cmd->add_option("--config", tune_config, "Preset name or config JSON path")->capture_default_str();
  tune_cmd->add_option("--budget", tune_spec.budget, "Total objective evaluations")->capture_default_str();
  tune_cmd->add_option("--init", tune_spec.init_points, "Latin-hypercube initial design size")->capture_default_str();
  tune_cmd->add_option("--seed", tune_spec.seed, "Random seed")->capture_default_str();
  tune_cmd->add_option("--objective", tune_objective, "validation | train")
      ->check(CLI::IsMember({"validation", "train"}));
  tune_cmd->add_flag("--per-dim", tune_spec.per_encoded_dim, "One weight per encoded dimension");
  tune_cmd->add_option("--out", tune_out, "Updated config JSON")->required();
  tune_cmd->add_option("--trace", tune_trace, "Optional JSON dump of the optimization trace");

  // predict
  DataOptions predict_data;
  std::string predict_model, predict_out;
  auto* predict_cmd = app.add_subcommand("predict", "Score and rank architectures with a trained model");
  add_data_options(predict_cmd, predict_data);
  predict_cmd->add_option("--model", predict_model, "Model file")->required();
  predict_cmd->add_option("--out", predict_out, "Predictions CSV (index,score,rank)")->required();

  // evaluate
  std::vector<std::string> eval_pred, eval_truth;
  std::string eval_kind = "rank";
  auto* eval_cmd = app.add_subcommand("evaluate", "Kendall tau between predictions and truth, per task and mean");
  eval_cmd->add_option("--pred", eval_pred, "Predictions file (repeat per task)")->required();
  eval_cmd->add_option("--truth", eval_truth, "Truth file: predictions-style table, sidecar or dataset")->required();
  eval_cmd->add_option("--label-kind", eval_kind, "Label kind of dataset truth files")
      ->check(CLI::IsMember({"rank", "score"}));

  // ablate
  DataOptions ablate_data;
  std::string ablate_config = "task0", ablate_truth, ablate_out;
  int ablate_seeds = 5;
  std::uint64_t ablate_seed = 0;
  AblationSpec ablate_spec;
  auto* ablate_cmd = app.add_subcommand("ablate", "Validation tau of each modification on repeated splits");
  add_data_options(ablate_cmd, ablate_data);
  ablate_cmd->add_option("--config", ablate_config, "Preset name or config JSON path")->capture_default_str();
  ablate_cmd->add_option("--seeds", ablate_seeds, "Number of split seeds")->capture_default_str();
  ablate_cmd->add_option("--seed", ablate_seed, "First split seed")->capture_default_str();
  ablate_cmd->add_option("--fraction", ablate_spec.fraction, "Training fraction")->capture_default_str();
  ablate_cmd->add_option("--tune-budget", ablate_spec.tune_budget, "BO budget per split for the last rung (0 = off)")
      ->capture_default_str();
  ablate_cmd->add_option("--truth", ablate_truth, "Ground-truth sidecar (index,score)");
  ablate_cmd->add_option("--out", ablate_out, "Write the ladder CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "E_USAGE: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*synth_cmd) {
      synth.signal = synth_signal == "planted" ? SynthSignal::PlantedColumn : SynthSignal::Linear;
      const auto task = make_synthetic(synth);
      write_synthetic(task, synth_out);
      std::cout << "wrote " << synth_out << " and " << truth_sidecar_path(synth_out).string() << "\n";
    } else if (*train_cmd) {
      const auto config = resolve_config(train_config);
      const auto ds = load(train_data);
      save_model(ensemble_fit(ds, config), train_out);
      std::cout << "trained " << config.name << " on " << ds.size() << " records -> " << train_out << "\n";
    } else if (*tune_cmd) {
      auto config = resolve_config(tune_config);
      const auto ds = load(tune_data);
      tune_spec.objective = tune_objective == "train" ? TuneObjective::TrainTau : TuneObjective::ValidationTau;
      const auto result = tune_weights(ds, config, tune_spec);
      config.tuned_weights = result.weights;
      write_text_file(tune_out, to_json(config).dump(1) + "\n");
      if (!tune_trace.empty()) write_text_file(tune_trace, to_json(result.trace).dump(1) + "\n");
      std::cout << "best objective " << format_double(result.trace.best_value) << " after "
                << result.trace.evaluations.size() << " evaluations -> " << tune_out << "\n";
    } else if (*predict_cmd) {
      const auto model = load_model(predict_model);
      const auto ds = load(predict_data);
      write_text_file(predict_out, predictions_csv(ensemble_predict(model, ds)));
      std::cout << "predicted " << ds.size() << " records -> " << predict_out << "\n";
    } else if (*eval_cmd) {
      if (eval_pred.size() != eval_truth.size())
        fail(ErrorKind::Usage, "--pred and --truth must be given the same number of times");
      const auto kind = label_kind_from_string(eval_kind);
      double sum = 0.0;
      char buf[128];
      for (std::size_t t = 0; t < eval_pred.size(); ++t) {
        const VectorXd p = read_goodness(eval_pred[t], kind);
        const VectorXd g = read_goodness(eval_truth[t], kind);
        if (p.size() != g.size())
          fail(ErrorKind::Data, "task " + std::to_string(t) + ": prediction and truth lengths differ");
        const double tau = kendall_tau(p, g).tau;
        sum += tau;
        std::snprintf(buf, sizeof(buf), "task=%zu tau=%.6f\n", t, tau);
        std::cout << buf;
      }
      std::snprintf(buf, sizeof(buf), "mean tau=%.6f\n", sum / static_cast<double>(eval_pred.size()));
      std::cout << buf;
    } else if (*ablate_cmd) {
      const auto config = resolve_config(ablate_config);
      const auto ds = load(ablate_data);
      if (ablate_seeds < 1) fail(ErrorKind::Usage, "--seeds must be >= 1");
      ablate_spec.seeds.clear();
      for (int s = 0; s < ablate_seeds; ++s) ablate_spec.seeds.push_back(ablate_seed + static_cast<std::uint64_t>(s));
      if (!ablate_truth.empty()) ablate_spec.truth = read_goodness(ablate_truth, LabelKind::Score);
      const auto table = format_ablation(run_ablation(ds, config, ablate_spec));
      if (ablate_out.empty())
        std::cout << table;
      else
        write_text_file(ablate_out, table);
    }
  } catch (const Error& e) {
    std::cerr << error_code(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "E_DATA: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
