// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "gpnas/ablation.hpp"
#include "gpnas/encoding.hpp"
#include "gpnas/ensemble.hpp"
#include "gpnas/gp.hpp"
#include "gpnas/kendall.hpp"
#include "gpnas/knn.hpp"
#include "gpnas/label_transform.hpp"
#include "gpnas/svr.hpp"
#include "gpnas/synth.hpp"
#include "gpnas/tuner.hpp"
#include "oracles.hpp"

using namespace gpnas;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

MatrixXd random_matrix(std::mt19937_64& rng, Index n, Index d) {
  std::normal_distribution<double> nd;
  MatrixXd X(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) X(i, j) = nd(rng);
  return X;
}

VectorXd row(std::initializer_list<double> v) {
  VectorXd r(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) r[i++] = x;
  return r;
}

Outcome encoder_golden() {
  Outcome o;
  const EncoderSpec one{1, {4}}, two{2, {4}};
  const VectorXd one_rows[] = {row({0, 0, 0, 0}), row({1, 0, 0, 0}), row({0, 1, 0, 0}), row({0, 0, 1, 0})};
  const VectorXd two_rows[] = {row({0, 0, 0, 0}), row({1, 1, 0, 0}), row({0, 1, 1, 0}), row({0, 0, 1, 1})};
  for (int v = 0; v < 4; ++v) {
    require(o, encode_row({v}, one) == one_rows[v], "one-hot row " + std::to_string(v));
    require(o, encode_row({v}, two) == two_rows[v], "two-hot row " + std::to_string(v));
  }
  std::mt19937_64 rng(101);
  int checked = 0;
  for (int k : {1, 2, 3, 9}) {
    for (int rep = 0; rep < 1000; ++rep) {
      const int d = 1 + static_cast<int>(rng() % 8);
      const int n = 1 + static_cast<int>(rng() % 10);
      std::vector<int> card(static_cast<std::size_t>(d));
      for (auto& c : card) c = 2 + static_cast<int>(rng() % 7);
      std::vector<std::vector<int>> feats(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(d)));
      for (auto& f : feats)
        for (int j = 0; j < d; ++j) f[static_cast<std::size_t>(j)] = static_cast<int>(rng() % card[j]);
      require(o, decode(encode(feats, EncoderSpec{k, card})) == feats, "decode(encode) identity, k=" + std::to_string(k));
      ++checked;
    }
  }
  if (o.pass) o.detail = "8 golden rows, " + std::to_string(checked) + " random datasets";
  return o;
}

Outcome kernel_algebra() {
  Outcome o;
  std::mt19937_64 rng(102);
  double worst = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    const Index d = 1 + static_cast<Index>(rng() % 12);
    const MatrixXd P = random_matrix(rng, 2, d);
    const VectorXd a = P.row(0).transpose(), b = P.row(1).transpose();
    VectorXd w(d);
    for (Index i = 0; i < d; ++i) w[i] = static_cast<double>(rng() % 1000) / 250.0;
    const double l = 0.5 + static_cast<double>(rng() % 40);
    const double b1 = static_cast<double>(rng() % 100) / 100.0, b2 = 1.0 - b1 + 0.25;
    const KernelSpec<double> rbf = SqrtRbf<double>{l};
    const KernelSpec<double> wk = WeightedRbf<double>{l, w};
    const KernelSpec<double> ens = EnsembleKernel<double>{b1, b2, {l}, {l, w}};
    for (const auto* k : {&rbf, &wk, &ens}) require(o, eval(*k, a, b) == eval(*k, b, a), "symmetry");
    require(o, eval(rbf, a, a) == 1.0 && eval(wk, a, a) == 1.0, "self-similarity 1");
    require(o, std::abs(eval(ens, a, a) - (b1 + b2)) <= 1e-15, "self-similarity beta1 + beta2");
    const double diff = std::abs(eval(KernelSpec<double>{WeightedRbf<double>{l, VectorXd::Ones(d)}}, a, b) - eval(rbf, a, b));
    worst = std::max(worst, diff);
    require(o, diff <= 1e-12, "identity-weight equivalence");
    const MatrixXd G = gram(ens, P), G1 = gram(rbf, P), G2 = gram(wk, P);
    require(o, G == (b1 * G1 + b2 * G2).eval(), "ensemble Gram decomposition");
  }
  if (o.pass) {
    std::ostringstream s;
    s << "500 pairs, max identity-weight gap " << worst;
    o.detail = s.str();
  }
  return o;
}

Outcome gp_correctness() {
  Outcome o;
  std::mt19937_64 rng(103);
  double worst_rel = 0.0, worst_interp = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Index n = 1 + static_cast<Index>(rng() % 20), d = 1 + static_cast<Index>(rng() % 6);
    const MatrixXd X = random_matrix(rng, n, d);
    const VectorXd y = random_matrix(rng, n, 1).col(0);
    const MatrixXd Xs = random_matrix(rng, 8, d);
    const double l = 0.5 + static_cast<double>(rng() % 10);
    const double s2 = static_cast<double>(rng() % 5) * 0.01 + 1e-3;
    const KernelSpec<double> k = SqrtRbf<double>{l};
    const auto prior = fit_prior_linear(X, y, 1e-3);
    const auto m = gp_fit(X, y, k, prior, s2);
    const VectorXd pred = gp_predict(m, Xs);
    const VectorXd ref = oracle::gp_mean_explicit(gram(k, X), gram(k, Xs, X), y - prior(X), prior(Xs), s2);
    const double rel = (pred - ref).norm() / std::max(ref.norm(), 1e-300);
    worst_rel = std::max(worst_rel, rel);
    require(o, rel <= 1e-8, "explicit-inverse agreement");

    const auto exact = gp_fit(X, y, k, prior, 0.0);
    const double interp = (gp_predict(exact, X) - y).cwiseAbs().maxCoeff();
    worst_interp = std::max(worst_interp, interp);
    require(o, interp <= 1e-6, "noiseless interpolation");
  }
  std::ostringstream s;
  s << "100 instances, max rel gap " << worst_rel << ", max interpolation error " << worst_interp;
  if (o.pass) o.detail = s.str();
  return o;
}

Outcome kendall() {
  Outcome o;
  require(o, kendall_tau(row({1, 2, 3, 4}), row({1, 2, 3, 4})).tau == 1.0, "identity = 1");
  require(o, kendall_tau(row({1, 2, 3, 4}), row({4, 3, 2, 1})).tau == -1.0, "reversed = -1");
  const auto ex = kendall_tau(row({1, 2, 3, 4, 5}), row({1, 3, 2, 5, 4}));
  require(o, ex.concordant == 8 && ex.discordant == 2 && std::abs(ex.tau - 0.6) < 1e-15, "C=8, D=2 example");
  std::mt19937_64 rng(104);
  int compared = 0;
  while (compared < 1000) {
    const Index n = 2 + static_cast<Index>(rng() % 49);
    VectorXd x(n), y(n);
    const int lx = 1 + static_cast<int>(rng() % 10), ly = 1 + static_cast<int>(rng() % 10);
    for (Index i = 0; i < n; ++i) x[i] = static_cast<double>(rng() % lx), y[i] = static_cast<double>(rng() % ly);
    const auto c = oracle::count_pairs(x, y);
    const std::int64_t total = n * (n - 1) / 2;
    if (c.ties_x == total || c.ties_y == total) continue;
    const auto r = kendall_tau(x, y);
    require(o, r.tau == oracle::tau_b(x, y) && r.concordant == c.concordant && r.discordant == c.discordant,
            "fast vs pairwise oracle");
    ++compared;
  }
  if (o.pass) o.detail = "3 examples, 1000 random tied vectors exact";
  return o;
}

Outcome label_transform() {
  Outcome o;
  std::mt19937_64 rng(105);
  for (const ScoreDistribution& dist : {ScoreDistribution{NormalScores{}}, ScoreDistribution{LeftSkewedScores{}}}) {
    for (int rep = 0; rep < 50; ++rep) {
      const int n = 1 + static_cast<int>(rng() % 200);
      VectorXi r(n);
      for (int i = 0; i < n; ++i) r[i] = i + 1;
      std::shuffle(r.data(), r.data() + n, rng);
      const VectorXd s = ranks_to_scores(r, dist);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (r[i] < r[j]) require(o, s[i] > s[j], "strict order reversal");
      require(o, scores_to_ranks(s) == r, "round trip");
    }
  }
  for (int n : {1, 2, 9, 50, 333}) {
    const double mu = 1.25;
    VectorXi r(n);
    for (int i = 0; i < n; ++i) r[i] = i + 1;
    const VectorXd s = ranks_to_scores(r, NormalScores{mu, 2.0});
    for (int i = 0; i < n; ++i) require(o, std::abs((s[i] - mu) + (s[n - 1 - i] - mu)) <= 1e-9, "antisymmetry about mu");
  }
  const ScoreDistribution skew = LeftSkewedScores{0.0, 1.0, -4.0};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double sum = 0.0;
  const int m = 100000;
  for (int i = 0; i < m; ++i) {
    double q = u(rng);
    while (q <= 0.0) q = u(rng);
    sum += quantile(skew, q);
  }
  const double mean = sum / m, med = median(skew);
  require(o, mean < med - 0.05, "Monte-Carlo mean below median");
  std::ostringstream s;
  s << "MC mean " << mean << " vs median " << med;
  if (o.pass) o.detail = s.str();
  return o;
}

Outcome svr_knn() {
  Outcome o;
  std::mt19937_64 rng(106);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 2 + static_cast<Index>(rng() % 14);
    const MatrixXd X = random_matrix(rng, n, 3);
    const VectorXd y = random_matrix(rng, n, 1).col(0);
    const MatrixXd K = gram(KernelSpec<double>{SqrtRbf<double>{1.0 + static_cast<double>(rng() % 5)}}, X);
    SvrParams p;
    p.C = 0.25 + static_cast<double>(rng() % 8) * 0.5;
    p.epsilon = static_cast<double>(rng() % 5) * 0.05;
    p.tol = 1e-8;
    const auto s = solve_svr_dual(K, y, p);
    const double gap = std::abs(s.objective - oracle::svr_dual_reference(K, y, p.C, p.epsilon));
    worst = std::max(worst, gap);
    require(o, gap <= 1e-4, "dual objective vs projected gradient");
    require(o, s.alpha.minCoeff() >= 0.0 && s.alpha_star.minCoeff() >= 0.0, "box lower bound");
    require(o, s.alpha.maxCoeff() <= p.C + 1e-12 && s.alpha_star.maxCoeff() <= p.C + 1e-12, "box upper bound");
  }
  int queries = 0;
  while (queries < 100) {
    const Index n = 3 + static_cast<Index>(rng() % 20);
    const MatrixXd X = random_matrix(rng, n, 4);
    const VectorXd y = random_matrix(rng, n, 1).col(0);
    const int k = 1 + static_cast<int>(rng() % n);
    const MatrixXd Q = random_matrix(rng, 10, 4);
    const VectorXd p = knn_predict(knn_fit(X, y, k), Q);
    for (Index q = 0; q < Q.rows(); ++q, ++queries) {
      double sum = 0.0;
      for (Index i : oracle::knn_indices(X, Q.row(q).transpose(), k)) sum += y[i];
      require(o, std::abs(p[q] - sum / k) <= 1e-12, "KNN vs exhaustive sort");
    }
  }
  std::ostringstream s;
  s << "20 SVR instances, max objective gap " << worst << "; " << queries << " KNN queries";
  if (o.pass) o.detail = s.str();
  return o;
}

Outcome tuner() {
  Outcome o;
  int tau_wins = 0, weight_wins = 0;
  std::ostringstream s;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SynthSpec ss;
    ss.n = 100;
    ss.dim = 6;
    ss.cardinality = 4;
    ss.noise = 0.1;
    ss.signal = SynthSignal::PlantedColumn;
    ss.seed = seed;
    const auto task = make_synthetic(ss);
    const auto plan = split(task.dataset, 0.8, seed);
    const auto train = task.dataset.subset(plan.train_indices);
    const auto val = task.dataset.subset(plan.validation_indices);
    const auto config = preset("task0");
    TuneSpec spec;
    spec.budget = 60;
    spec.seed = seed;
    const auto result = tune_weights(train, config, spec);
    const double tuned = holdout_tau(train, val, config, spec, result.weights);
    const double uniform = holdout_tau(train, val, config, spec, VectorXd::Ones(6));
    const bool tau_ok = tuned >= uniform;
    const bool weight_ok = result.weights[0] > result.weights.tail(5).mean();
    tau_wins += tau_ok;
    weight_wins += weight_ok;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s[%.3f vs %.3f, w0 %.2f vs %.2f]", seed ? " " : "", tuned, uniform,
                  result.weights[0], result.weights.tail(5).mean());
    s << buf;
  }
  require(o, tau_wins >= 4, "tuned tau >= uniform on " + std::to_string(tau_wins) + "/5 seeds");
  require(o, weight_wins >= 4, "informative weight largest on " + std::to_string(weight_wins) + "/5 seeds");
  o.detail = (o.pass ? "" : o.detail + ": ") + s.str();
  return o;
}

SynthTask criterion_task(std::uint64_t seed, double noise) {
  SynthSpec ss;
  ss.n = 200;
  ss.noise = noise;
  ss.seed = seed;
  return make_synthetic(ss);
}

Outcome end_to_end() {
  Outcome o;
  std::ostringstream s;
  for (double noise : {0.0, 0.1}) {
    const double bar = noise == 0.0 ? 0.9 : 0.7;
    s << (noise == 0.0 ? "noise 0:" : "; noise 0.1:");
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto task = criterion_task(seed, noise);
      const auto plan = split(task.dataset, 0.8, seed);
      const auto val = task.dataset.subset(plan.validation_indices);
      const auto m = ensemble_fit(task.dataset.subset(plan.train_indices), preset("task0"));
      const double tau = kendall_tau(ensemble_predict(m, val).scores, val.goodness()).tau;
      char buf[32];
      std::snprintf(buf, sizeof(buf), " %.3f", tau);
      s << buf;
      require(o, tau >= bar, "validation tau below bar");
    }
  }
  o.detail = (o.pass ? "" : o.detail + ": ") + s.str();
  return o;
}

Outcome ablation_sanity() {
  Outcome o;
  double plain = 0.0, full = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto task = criterion_task(seed, 0.1);
    AblationSpec spec;
    spec.seeds = {seed};
    spec.tune_budget = 60;
    const auto rows = run_ablation(task.dataset, preset("task0"), spec);
    plain += rows.front().mean / 5.0;
    full += rows.back().mean / 5.0;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "ensemble %.4f vs plain GP-NAS %.4f (margin %.4f)", full, plain, full - plain);
  require(o, full >= plain - 0.02, "ladder regressed");
  o.detail = (o.pass ? "" : o.detail + ": ") + buf;
  return o;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GPNAS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("gpnas_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto at = [&](const std::string& name) { return (dir / name).string(); };
  require(o, run_cli("synth --n 200 --noise 0.1 --seed 7 --out " + at("data.csv")) == 0, "synth failed");
  for (const std::string t : {"1", "2"}) {
    require(o, run_cli("train --data " + at("data.csv") + " --config task0 --out " + at("model" + t + ".json")) == 0,
            "train failed");
    require(o, run_cli("predict --data " + at("data.csv") + " --model " + at("model" + t + ".json") + " --out " +
                       at("pred" + t + ".csv")) == 0,
            "predict failed");
  }
  if (o.pass) {
    require(o, read_text_file(at("model1.json")) == read_text_file(at("model2.json")), "model files differ");
    require(o, read_text_file(at("pred1.csv")) == read_text_file(at("pred2.csv")), "prediction files differ");
  }
  if (o.pass) o.detail = "model and prediction files byte-identical";
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "encoder golden rows and inverse", 1.0, encoder_golden},
      {2, "kernel algebra", 1.0, kernel_algebra},
      {3, "GP correctness", 10.0, gp_correctness},
      {4, "Kendall tau", 5.0, kendall},
      {5, "label transform", 5.0, label_transform},
      {6, "SVR and KNN", 30.0, svr_knn},
      {7, "tuner behavior", 300.0, tuner},
      {8, "end-to-end pipeline", 120.0, end_to_end},
      {9, "ablation ladder sanity", 300.0, ablation_sanity},
      {10, "determinism", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0.0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += " (runtime limit exceeded)";
    }
    failures += !o.pass;
    std::printf("criterion %2d %-32s %s  %.2fs  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
