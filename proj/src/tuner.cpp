#include "gpnas/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gpnas/encoding.hpp"
#include "gpnas/error.hpp"
#include "gpnas/gp.hpp"
#include "gpnas/kendall.hpp"
#include "gpnas/label_transform.hpp"

namespace gpnas {

double expected_improvement(double mean, double std, double best) {
  if (!(std > 0.0)) return std::max(mean - best, 0.0);
  const double z = (mean - best) / std;
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  return (mean - best) * cdf + std * pdf;
}

MatrixXd latin_hypercube(int n, const std::vector<std::pair<double, double>>& bounds, std::mt19937_64& rng) {
  if (n < 1) fail(ErrorKind::Usage, "latin hypercube needs at least one point");
  const auto d = static_cast<Index>(bounds.size());
  MatrixXd pts(n, d);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> strata(static_cast<std::size_t>(n));
  for (Index j = 0; j < d; ++j) {
    std::iota(strata.begin(), strata.end(), 0);
    for (std::size_t i = strata.size() - 1; i > 0; --i) std::swap(strata[i], strata[rng() % (i + 1)]);
    const auto [lo, hi] = bounds[static_cast<std::size_t>(j)];
    for (int i = 0; i < n; ++i) {
      const double u = (strata[static_cast<std::size_t>(i)] + unit(rng)) / n;
      pts(i, j) = lo + u * (hi - lo);
    }
  }
  return pts;
}

namespace {

EncoderSpec tuning_encoder(const TaskDataset& ds, const TaskConfig& config) {
  return EncoderSpec::for_dataset(ds, config.encoder_k);
}

std::vector<std::pair<double, double>> resolve_bounds(const TuneSpec& spec, int dims) {
  if (spec.bounds.empty()) return std::vector<std::pair<double, double>>(static_cast<std::size_t>(dims), {0.0, 1.0});
  if (static_cast<int>(spec.bounds.size()) != dims)
    fail(ErrorKind::Usage, "tune bounds have " + std::to_string(spec.bounds.size()) + " entries, expected " +
                               std::to_string(dims));
  for (const auto& [lo, hi] : spec.bounds)
    if (!(lo < hi) || lo < 0.0) fail(ErrorKind::Usage, "tune bounds must satisfy 0 <= low < high");
  return spec.bounds;
}

double split_tau(const TaskDataset& train, const TaskDataset& eval, const TaskConfig& config, const TuneSpec& spec,
                 const EncoderSpec& encoder, const VectorXd& dim_weights) {
  const VectorXd y = training_targets(train, config.label_dist);
  const MatrixXd X = encode(train, encoder).data;
  PriorMean<double> prior = LinearPrior<double>{VectorXd::Zero(X.cols()), y.mean()};
  if (spec.prior == TunePrior::Linear) prior = fit_prior_linear(X, y, config.prior_ridge);
  const auto gp = gp_fit(X, y, WeightedRbf<double>{config.kernel_length, dim_weights}, prior, config.sigma_n2);
  const VectorXd pred = gp_predict(gp, encode(eval, encoder).data);
  return kendall_tau(pred, eval.goodness()).tau;
}

VectorXd dimension_weights(const EncoderSpec& encoder, const TuneSpec& spec, const VectorXd& weights) {
  if (spec.per_encoded_dim && weights.size() != encoder.total_width())
    fail(ErrorKind::Usage, "per-dimension weights do not match the encoded width");
  return spec.per_encoded_dim ? weights : expand_column_weights(encoder, weights);
}

}  // namespace

double holdout_tau(const TaskDataset& train, const TaskDataset& eval, const TaskConfig& config, const TuneSpec& spec,
                   const VectorXd& weights) {
  const EncoderSpec encoder = tuning_encoder(train, config);
  return split_tau(train, eval, config, spec, encoder, dimension_weights(encoder, spec, weights));
}

int tuned_dimension(const TaskDataset& ds, const TaskConfig& config, const TuneSpec& spec) {
  const int natural =
      spec.per_encoded_dim ? static_cast<int>(tuning_encoder(ds, config).total_width()) : static_cast<int>(ds.dim());
  if (spec.dims != 0 && spec.dims != natural)
    fail(ErrorKind::Usage, "tune dims = " + std::to_string(spec.dims) + " but the data calls for " +
                               std::to_string(natural));
  return natural;
}

double weight_objective(const TaskDataset& ds, const TaskConfig& config, const TuneSpec& spec, const VectorXd& weights) {
  const EncoderSpec encoder = tuning_encoder(ds, config);
  const VectorXd dim_weights = dimension_weights(encoder, spec, weights);
  try {
    if (spec.objective == TuneObjective::TrainTau) return split_tau(ds, ds, config, spec, encoder, dim_weights);
    double sum = 0.0;
    for (int r = 0; r < spec.split_repeats; ++r) {
      const auto plan = split(ds, spec.split_fraction, spec.seed + static_cast<std::uint64_t>(r));
      sum += split_tau(ds.subset(plan.train_indices), ds.subset(plan.validation_indices), config, spec, encoder,
                       dim_weights);
    }
    return sum / spec.split_repeats;
  } catch (const Error&) {
    return -1.0;
  }
}

TuneResult tune_weights(const TaskDataset& ds, const TaskConfig& config, const TuneSpec& spec) {
  validate(config);
  validate(ds);
  if (!ds.has_labels()) fail(ErrorKind::Data, "tuning data must be fully labelled");
  if (spec.init_points < 2 || spec.budget < spec.init_points)
    fail(ErrorKind::Usage, "tune spec needs budget >= init_points >= 2");
  if (spec.candidates < 1 || spec.split_repeats < 1) fail(ErrorKind::Usage, "tune spec: candidates and repeats >= 1");
  if (!(spec.floor_fraction >= 0.0 && spec.floor_fraction < 1.0))
    fail(ErrorKind::Usage, "tune spec: floor_fraction must lie in [0, 1)");

  const int dims = tuned_dimension(ds, config, spec);
  const auto bounds = resolve_bounds(spec, dims);
  // Each weight is searched through a unit coordinate t. The lowest floor_fraction of t maps
  // to the lower bound exactly; the rest maps linearly onto [lo^(1/4), hi^(1/4)] (or [lo, hi]
  // without the root warp) and is raised back to the fourth power.
  auto root = [&](double w) { return spec.root_warp ? std::sqrt(std::sqrt(w)) : w; };
  auto power = [&](double u) { return spec.root_warp ? (u * u) * (u * u) : u; };
  auto to_weight = [&](double t, int j) {
    const auto [wlo, whi] = bounds[static_cast<std::size_t>(j)];
    if (t < spec.floor_fraction) return wlo;
    if (t >= 1.0) return whi;
    const double s = (t - spec.floor_fraction) / (1.0 - spec.floor_fraction);
    return std::clamp(power(root(wlo) + s * (root(whi) - root(wlo))), wlo, whi);
  };
  const std::vector<std::pair<double, double>> unit_box(static_cast<std::size_t>(dims), {0.0, 1.0});

  std::mt19937_64 rng(spec.seed);
  TuneResult result;
  auto& trace = result.trace;
  std::vector<VectorXd> unit_points;
  auto evaluate = [&](const VectorXd& t) {
    VectorXd point(dims);
    for (int j = 0; j < dims; ++j) point[j] = to_weight(t[j], j);
    const double value = weight_objective(ds, config, spec, point);
    unit_points.push_back(t);
    trace.evaluations.push_back({point, value});
    if (trace.evaluations.size() == 1 || value > trace.best_value) {
      trace.best_value = value;
      trace.best_point = point;
    }
  };

  // The initial design is the all-ones weighting (clamped into the bounds) when requested,
  // followed by a Latin hypercube over the remaining initial points.
  int lhs_points = spec.init_points;
  if (spec.include_default) {
    VectorXd t(dims);
    for (int j = 0; j < dims; ++j) {
      const auto [wlo, whi] = bounds[static_cast<std::size_t>(j)];
      const double w = std::clamp(1.0, wlo, whi);
      if (w <= wlo) t[j] = 0.0;
      else if (w >= whi) t[j] = 1.0;
      else t[j] = spec.floor_fraction + (1.0 - spec.floor_fraction) * ((root(w) - root(wlo)) / (root(whi) - root(wlo)));
    }
    evaluate(t);
    --lhs_points;
  }
  const MatrixXd design = latin_hypercube(lhs_points, unit_box, rng);
  for (int i = 0; i < lhs_points; ++i) evaluate(design.row(i).transpose());

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(trace.evaluations.size()) < spec.budget) {
    const auto m = static_cast<Index>(trace.evaluations.size());
    MatrixXd U(m, dims);
    VectorXd v(m);
    for (Index i = 0; i < m; ++i) {
      U.row(i) = unit_points[static_cast<std::size_t>(i)].transpose();
      v[i] = trace.evaluations[static_cast<std::size_t>(i)].value;
    }
    const double v_mean = v.mean();
    const double v_sd = std::sqrt((v.array() - v_mean).square().sum() / static_cast<double>(m));
    const double scale = v_sd > 0.0 ? v_sd : 1.0;
    const VectorXd z = (v.array() - v_mean) / scale;

    const auto surrogate = gp_fit(U, z, SqrtRbf<double>{spec.surrogate_length},
                                  LinearPrior<double>{VectorXd::Zero(dims), 0.0}, spec.surrogate_noise);
    MatrixXd C(spec.candidates, dims);
    for (Index i = 0; i < C.rows(); ++i)
      for (Index j = 0; j < dims; ++j) C(i, j) = unit(rng);
    const VectorXd mean = gp_predict(surrogate, C);
    const VectorXd var = gp_posterior_variance(surrogate, C);
    const double best = z.maxCoeff();

    Index pick = 0;
    double best_ei = -1.0;
    for (Index i = 0; i < C.rows(); ++i) {
      const double ei = expected_improvement(mean[i], std::sqrt(var[i]), best);
      if (ei > best_ei) best_ei = ei, pick = i;
    }
    evaluate(C.row(pick).transpose());
  }

  result.weights = trace.best_point;
  return result;
}

nlohmann::json to_json(const TuneTrace& trace) {
  auto vec = [](const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json evals = nlohmann::json::array();
  for (const auto& e : trace.evaluations) evals.push_back({{"point", vec(e.point)}, {"value", e.value}});
  return {{"evaluations", evals}, {"best_point", vec(trace.best_point)}, {"best_value", trace.best_value}};
}

}  // namespace gpnas
