#include "doctest.h"

#include <cmath>

#include "gsc/datagen.hpp"
#include "gsc/margins.hpp"
#include "gsc/rng.hpp"
#include "gsc/solvers.hpp"
#include "oracle/oracles.hpp"

using namespace gsc;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Dataset nl_cluster_data(std::uint64_t seed, int per_cluster = 25) {
  return gen_generalization_env(Env::NL, seed, per_cluster, 1).train;
}

}  // namespace

TEST_CASE("train_soft: s-hinge separates the NL clusters strategically") {
  Dataset train = nl_cluster_data(1);
  ResponseSetting setting = ResponseSetting::nl(0.0);
  OptimizerConfig opt;
  opt.epochs = 200;
  opt.batch_size = 5;
  opt.seed = 1;
  TrainResult result = train_soft(StrategicLoss::GpSHinge, setting, train, 0.01, opt);

  double train_error = 0.0;
  for (const auto& ex : train) train_error += strategic_zero_one(setting, result.model, ex);
  CHECK(train_error == 0.0);

  // convergence sanity: the trace settles over the last tenth of the epochs
  std::size_t tail = result.objective_trace.size() / 10;
  for (std::size_t i = result.objective_trace.size() - tail;
       i < result.objective_trace.size(); ++i) {
    CHECK(result.objective_trace[i] <= result.objective_trace[i - 1] + 1e-3);
  }
}

TEST_CASE("train_soft: dominant regularizer kills the weights") {
  Dataset train = nl_cluster_data(2);
  OptimizerConfig opt;
  opt.epochs = 100;
  opt.batch_size = 5;
  opt.seed = 2;
  TrainResult result = train_soft(StrategicLoss::GpSHinge, ResponseSetting::nl(0.0), train,
                                  1e6, opt);
  CHECK(result.model.w.norm() <= 1e-3);

  double mean_loss = 0.0;
  for (const auto& ex : train) {
    mean_loss += s_hinge_gp(result.model, ex.x, target_of(ex.z), ex.y).value;
  }
  CHECK(mean_loss / train.size() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("slack assignment identity: soft objective equals the slack program") {
  // At any w, the optimal slack of the constrained program is
  // max{0, 1 - y(w.x + 2 z ||w||)} per constraint; sums must agree exactly.
  Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    Rng r = rng.split(trial);
    Vec w = vec2(r.normal(), r.normal());
    Dataset data;
    for (int i = 0; i < 20; ++i) {
      data.push_back({vec2(3.0 * r.normal(), 3.0 * r.normal()),
                      TargetLabel{r.rademacher()}, r.rademacher()});
    }
    double slack_sum = 0.0;
    for (const auto& ex : data) {
      double arg = ex.y * (dot(w, ex.x) + 2.0 * target_of(ex.z) * w.norm());
      slack_sum += std::max(0.0, 1.0 - arg);
    }
    double hinge_sum = 0.0;
    LinearModel m{w};
    for (const auto& ex : data) {
      hinge_sum += s_hinge_gp(m, ex.x, target_of(ex.z), ex.y).value;
    }
    CHECK(std::abs(slack_sum - hinge_sum) <= 1e-9);
  }
}

TEST_CASE("train_soft rejects bad inputs") {
  Dataset train = nl_cluster_data(3, 4);
  OptimizerConfig opt;
  CHECK_THROWS_AS(
      train_soft(StrategicLoss::GpSHinge, ResponseSetting::nl(0.0), train, 0.0, opt),
      std::invalid_argument);
  CHECK_THROWS_AS(
      train_soft(StrategicLoss::StrategicZeroOne, ResponseSetting::nl(0.0), train, 0.1, opt),
      std::invalid_argument);
  CHECK_THROWS_AS(
      train_soft(StrategicLoss::GpSHinge, ResponseSetting::nl(0.0), Dataset{}, 0.1, opt),
      std::invalid_argument);
}

TEST_CASE("train_hard: 1D two-point instance is feasible") {
  Dataset data;
  Vec xp(1), xn(1);
  xp << 3.0;
  xn << -3.0;
  data.push_back({xp, TargetLabel{+1}, +1});
  data.push_back({xn, TargetLabel{-1}, -1});
  OptimizerConfig opt;
  opt.epochs = 150;
  opt.batch_size = 2;
  opt.seed = 4;
  TrainResult result = train_hard(ResponseSetting::nl(0.0), data, 1e-3, opt);
  CHECK(result.feasible);
  CHECK(result.model.w.norm() == doctest::Approx(1.0));
  CHECK(result.model.w[0] > 0.0);
  // normalized margin: y (w x + 2 z) = 3 w + 2 w-norm-scaled
  CHECK(strategic_margin_nl(result.model, data) == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("train_hard reaches the angle-grid margin on separable 2D data") {
  for (std::uint64_t seed : {11, 12, 13}) {
    Dataset data = nl_cluster_data(seed, 15);
    OptimizerConfig opt;
    opt.epochs = 250;
    opt.batch_size = 5;
    opt.seed = seed;
    TrainResult result = train_hard(ResponseSetting::nl(0.0), data, 1e-3, opt);
    auto oracle_best = oracle::angle_grid_best_smargin(data);
    REQUIRE(oracle_best.margin > 0.0);
    CHECK(result.feasible);
    CHECK(strategic_margin_nl(result.model, data) >= 0.95 * oracle_best.margin);
  }
}

TEST_CASE("train_hard: hopeless adversarial instance reports infeasibility") {
  // every point can flip toward the wrong label under any direction
  Dataset data = {{vec2(0.5, 0), TargetLabel{-1}, +1},
                  {vec2(-0.5, 0), TargetLabel{+1}, -1},
                  {vec2(0, 0.5), TargetLabel{-1}, +1},
                  {vec2(0, -0.5), TargetLabel{+1}, -1}};
  OptimizerConfig opt;
  opt.epochs = 60;
  opt.batch_size = 4;
  opt.seed = 5;
  TrainResult result = train_hard(ResponseSetting::nl(0.0), data, 1e-3, opt);
  CHECK_FALSE(result.feasible);
  CHECK(result.max_violation > 0.0);
}

TEST_CASE("degenerate smoothing temperature halves the gate everywhere") {
  LinearModel m{vec2(1, 0)};
  for (double x0 : {-3.0, -1.0, 0.5, 4.0}) {
    Vec moved = respond_gp_smoothed(m, vec2(x0, 1), +1, 1e-12);
    double gate = (x0 - moved[0]) / x0;  // fraction of the projection step taken
    CHECK(gate == doctest::Approx(0.5).epsilon(1e-6));
  }
}

TEST_CASE("cross_validate: tie-breaking and degenerate folds") {
  Dataset data;
  for (int i = 0; i < 12; ++i) {
    data.push_back({vec2(i % 2 ? 1.0 : -1.0, 0), TargetLabel{i % 2 ? 1 : -1},
                    i % 2 ? 1 : -1});
  }
  auto constant_score = [](const Dataset&, const Dataset&, double) { return 0.5; };
  CHECK(cross_validate(constant_score, data, {1.0, 0.01, 0.1}, 3) == 0.01);

  auto prefers_large = [](const Dataset&, const Dataset&, double lambda) {
    return lambda;
  };
  CHECK(cross_validate(constant_score, data, {0.01}, 3) == 0.01);
  CHECK(cross_validate(prefers_large, data, {0.01, 0.1, 1.0}, 3) == 1.0);

  CHECK_THROWS_AS(cross_validate(constant_score, Dataset{data[0]}, {0.1}, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(cross_validate(constant_score, data, {0.1}, 1), std::invalid_argument);

  // single-class folds are skipped but the rest still vote
  Dataset skewed;
  for (int i = 0; i < 9; ++i) {
    skewed.push_back({vec2(1, 0), TargetLabel{+1}, i == 0 ? -1 : +1});
  }
  CHECK(cross_validate(prefers_large, skewed, {0.01, 0.1}, 3) == 0.1);
}

TEST_CASE("evaluate: strategic vs raw accuracy") {
  ResponseSetting nl = ResponseSetting::nl(0.0);
  LinearModel m{vec2(1, 0)};

  // aligned in-band targets: strategic accuracy is perfect, raw is not
  Dataset band = {{vec2(0.5, 0), TargetLabel{+1}, +1},
                  {vec2(-0.5, 0), TargetLabel{+1}, +1},
                  {vec2(-0.7, 1), TargetLabel{-1}, -1},
                  {vec2(0.7, 1), TargetLabel{-1}, -1}};
  EvalReport rep = evaluate(nl, m, band);
  CHECK(rep.strategic_accuracy == doctest::Approx(1.0));
  CHECK(rep.raw_accuracy == doctest::Approx(0.5));
  CHECK(rep.per_class.at(+1).count == 2);
  CHECK(rep.per_class.at(+1).strategic_accuracy == doctest::Approx(1.0));

  // adversarial users who can all flip: strategic never beats raw
  ResponseSetting adv = ResponseSetting::adv();
  Dataset gamed = {{vec2(1.0, 0), std::monostate{}, +1},
                   {vec2(-1.0, 0), std::monostate{}, -1}};
  EvalReport rep_adv = evaluate(adv, m, gamed);
  CHECK(rep_adv.strategic_accuracy <= rep_adv.raw_accuracy);
  CHECK(rep_adv.strategic_accuracy == doctest::Approx(0.0));
}

TEST_CASE("training is bitwise deterministic for a fixed seed") {
  Dataset train = nl_cluster_data(6);
  OptimizerConfig opt;
  opt.epochs = 50;
  opt.batch_size = 5;
  opt.seed = 77;
  TrainResult a = train_soft(StrategicLoss::GpSHinge, ResponseSetting::nl(0.0), train,
                             0.1, opt);
  TrainResult b = train_soft(StrategicLoss::GpSHinge, ResponseSetting::nl(0.0), train,
                             0.1, opt);
  CHECK(a.model.w == b.model.w);
  CHECK(a.objective_trace == b.objective_trace);

  opt.seed = 78;
  TrainResult c = train_soft(StrategicLoss::GpSHinge, ResponseSetting::nl(0.0), train,
                             0.1, opt);
  CHECK(a.model.w != c.model.w);
}

TEST_CASE("train_ppe: single user whose history covers the evaluation items") {
  Rng rng(107);
  const int l = 3, d = 2, n = 6;
  History hist;
  hist.items = Mat(n, l);
  hist.labels = Vec(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < l; ++i) hist.items(j, i) = rng.normal();
    hist.labels[j] = rng.rademacher();
  }
  Vec x = vec2(0.3, -0.2);
  PpeDataset data;
  for (int j = 0; j < n; ++j) {
    data.push_back({x, hist, hist.items.row(j).transpose(),
                    static_cast<int>(hist.labels[j])});
  }
  OptimizerConfig opt;
  opt.epochs = 80;
  opt.batch_size = 3;
  opt.seed = 9;
  PpeTrainResult result = train_ppe(data, 0.001, opt, l, d);
  EvalReport rep = evaluate(ResponseSetting::ppe(), result.model, data);
  CHECK(rep.strategic_accuracy >= 0.99);

  // empty-history guard
  PpeDataset no_hist = {{x, History{}, hist.items.row(0).transpose(), +1}};
  CHECK_THROWS_AS(train_ppe(no_hist, 0.001, opt, l, d), std::invalid_argument);
}
