#include "gpnas/synth.hpp"

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gpnas/error.hpp"
#include "gpnas/label_transform.hpp"

namespace gpnas {

namespace {

bool space_holds(int n, int dim, int cardinality) {
  double size = 1.0;
  for (int j = 0; j < dim && size < n; ++j) size *= cardinality;
  return size >= n;
}

}  // namespace

SynthTask make_synthetic(const SynthSpec& spec) {
  if (spec.n < 4) fail(ErrorKind::Usage, "synthetic task needs n >= 4");
  if (spec.dim < 1 || spec.cardinality < 2) fail(ErrorKind::Usage, "synthetic task needs dim >= 1, cardinality >= 2");
  if (!(spec.noise >= 0.0)) fail(ErrorKind::Usage, "noise must be non-negative");
  if (!space_holds(spec.n, spec.dim, spec.cardinality))
    fail(ErrorKind::Usage, "cannot draw " + std::to_string(spec.n) + " distinct architectures from the search space");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto draw_code = [&] { return static_cast<int>(rng() % static_cast<std::uint64_t>(spec.cardinality)); };

  VectorXd coef(spec.dim);
  for (int j = 0; j < spec.dim; ++j) coef[j] = 0.5 + unit(rng);
  VectorXd table(spec.cardinality);
  for (int v = 0; v < spec.cardinality; ++v) table[v] = 2.0 * unit(rng) - 1.0;

  SynthTask task;
  auto& ds = task.dataset;
  ds.cardinalities.assign(static_cast<std::size_t>(spec.dim), spec.cardinality);
  ds.label_kind = LabelKind::Rank;
  std::set<std::vector<int>> seen;
  while (static_cast<int>(ds.records.size()) < spec.n) {
    std::vector<int> f(static_cast<std::size_t>(spec.dim));
    for (int& v : f) v = draw_code();
    if (seen.insert(f).second) ds.records.push_back(ArchRecord{std::move(f), std::nullopt});
  }

  task.truth.resize(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    const auto& f = ds.records[static_cast<std::size_t>(i)].features;
    double s = 0.0;
    if (spec.signal == SynthSignal::Linear) {
      for (int j = 0; j < spec.dim; ++j) s += coef[j] * f[static_cast<std::size_t>(j)];
      if (spec.dim >= 2) s += spec.interaction * f[0] * f[1] / (spec.cardinality - 1.0);
    } else {
      s = table[f[0]];
    }
    task.truth[i] = s;
  }

  const double mean = task.truth.mean();
  const double sd = std::sqrt((task.truth.array() - mean).square().mean());
  const double sigma = spec.noise * (sd > 0.0 ? sd : 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  task.observed = task.truth;
  if (sigma > 0.0)
    for (int i = 0; i < spec.n; ++i) task.observed[i] += sigma * gauss(rng);

  const VectorXi ranks = scores_to_ranks(task.observed);
  for (int i = 0; i < spec.n; ++i) ds.records[static_cast<std::size_t>(i)].label = ranks[i];
  validate(ds);
  return task;
}

std::filesystem::path truth_sidecar_path(const std::filesystem::path& dataset_path) {
  auto p = dataset_path;
  p.replace_extension(".truth.csv");
  return p;
}

void write_synthetic(const SynthTask& task, const std::filesystem::path& out_path) {
  save_dataset(task.dataset, out_path);
  std::string truth = "index,score\n";
  for (Index i = 0; i < task.truth.size(); ++i) truth += std::to_string(i) + "," + format_double(task.truth[i]) + "\n";
  write_text_file(truth_sidecar_path(out_path), truth);
}

}  // namespace gpnas
