#include "gsc/solvers.hpp"

#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "gsc/errors.hpp"
#include "gsc/margins.hpp"
#include "gsc/rng.hpp"

namespace gsc {

namespace {

// Mini-batch Adam over a flat parameter vector. The shuffle schedule is a pure
// function of the seed, so runs are reproducible under any parallelism.
template <typename LossFn>
std::pair<Vec, std::vector<double>> adam_minimize(
    Eigen::Index n_params, std::size_t n_samples, const LossFn& sample_loss,
    double lambda_reg, const OptimizerConfig& opt, Vec init) {
  Vec w = std::move(init);
  Vec m = Vec::Zero(n_params);
  Vec v = Vec::Zero(n_params);
  std::vector<double> trace;
  trace.reserve(opt.epochs);
  std::vector<std::size_t> order(n_samples);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(opt.seed);
  long t = 0;

  // constant step for 90% of the run, then a linear ramp-down so the trace
  // settles instead of bouncing at the Adam step scale
  const int decay_start = opt.epochs - std::max(1, opt.epochs / 10);

  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    double step = opt.step_size;
    if (epoch >= decay_start) {
      double frac = static_cast<double>(epoch - decay_start + 1) /
                    (opt.epochs - decay_start + 1);
      step *= 1.0 - 0.95 * frac;
    }
    Rng epoch_rng = rng.split(static_cast<std::uint64_t>(epoch));
    epoch_rng.shuffle(order);
    const std::size_t bs = static_cast<std::size_t>(opt.batch_size);
    for (std::size_t start = 0; start < n_samples; start += bs) {
      std::size_t end = std::min(start + bs, n_samples);
      Vec grad = Vec::Zero(n_params);
      for (std::size_t i = start; i < end; ++i) {
        grad += sample_loss(w, order[i]).grad;
      }
      grad /= static_cast<double>(end - start);
      grad += 2.0 * lambda_reg * w;

      ++t;
      m = opt.beta1 * m + (1.0 - opt.beta1) * grad;
      v = opt.beta2 * v + (1.0 - opt.beta2) * grad.cwiseProduct(grad);
      double mhat_scale = 1.0 / (1.0 - std::pow(opt.beta1, t));
      double vhat_scale = 1.0 / (1.0 - std::pow(opt.beta2, t));
      w -= step * (mhat_scale * m.array() /
                   ((vhat_scale * v.array()).sqrt() + opt.eps))
                      .matrix();
    }
    double objective = lambda_reg * w.squaredNorm();
    for (std::size_t i = 0; i < n_samples; ++i) objective += sample_loss(w, i).value / n_samples;
    if (!std::isfinite(objective)) {
      throw NumericError("training diverged: objective is not finite at epoch " +
                         std::to_string(epoch));
    }
    trace.push_back(objective);
  }
  return {std::move(w), std::move(trace)};
}

Vec small_random_init(Eigen::Index n, std::uint64_t seed) {
  Rng rng = Rng(seed).split(0x1417);
  Vec w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = 0.01 * rng.normal();
  return w;
}

struct LinearLossFn {
  StrategicLoss loss;
  const ResponseSetting* setting;
  const Dataset* dataset;
  double temperature;

  LossGrad operator()(const Vec& w, std::size_t i) const {
    const Example& ex = (*dataset)[i];
    LinearModel model{w};
    switch (loss) {
      case StrategicLoss::StandardHinge:
        return hinge_standard(model, ex.x, ex.y);
      case StrategicLoss::NaiveHinge:
        return hinge_naive(*setting, model, ex, temperature);
      case StrategicLoss::GpSHinge:
      case StrategicLoss::GeneralizedGsHinge:
        return s_hinge_gp(model, ex.x, target_label(*setting, ex), ex.y);
      default:
        throw std::invalid_argument("train_soft: loss is not trainable for linear models");
    }
  }
};

}  // namespace

TrainResult train_soft(StrategicLoss loss, const ResponseSetting& setting,
                       const Dataset& dataset, double lambda_reg,
                       const OptimizerConfig& opt) {
  if (lambda_reg <= 0.0) throw std::invalid_argument("train_soft: lambda must be positive");
  if (dataset.empty()) throw std::invalid_argument("train_soft: empty dataset");
  const Eigen::Index d = dataset.front().x.size();
  LinearLossFn fn{loss, &setting, &dataset, setting.smoothing_temperature};
  auto [w, trace] = adam_minimize(d, dataset.size(), fn, lambda_reg, opt,
                                  small_random_init(d, opt.seed));
  TrainResult result{LinearModel{std::move(w)}, trace.back(), std::move(trace), true, 0.0};
  return result;
}

TrainResult train_hard(const ResponseSetting& setting, const Dataset& dataset,
                       double tolerance, const OptimizerConfig& opt) {
  if (dataset.empty()) throw std::invalid_argument("train_hard: empty dataset");
  const Eigen::Index d = dataset.front().x.size();

  auto worst_violation = [&](const LinearModel& model) {
    double worst = 0.0;
    double wn = model.w.norm();
    for (const auto& ex : dataset) {
      double arg = ex.y * (dot(model.w, ex.x) + 2.0 * target_of(ex.z) * wn);
      worst = std::max(worst, 1.0 - arg);
    }
    return worst;
  };

  Vec w = small_random_init(d, opt.seed);
  std::vector<double> trace;
  LinearLossFn fn{StrategicLoss::GpSHinge, &setting, &dataset, setting.smoothing_temperature};
  double violation = std::numeric_limits<double>::infinity();
  for (double lambda : {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    auto [next, stage_trace] = adam_minimize(d, dataset.size(), fn, lambda, opt, std::move(w));
    w = std::move(next);
    trace.insert(trace.end(), stage_trace.begin(), stage_trace.end());
    violation = worst_violation(LinearModel{w});
    if (violation <= tolerance) break;
  }

  TrainResult result;
  result.feasible = violation <= tolerance;
  result.max_violation = violation;
  result.final_objective = trace.empty() ? 0.0 : trace.back();
  result.objective_trace = std::move(trace);
  double wn = w.norm();
  result.model = LinearModel{wn > 0 ? Vec(w / wn) : w};
  return result;
}

TrainResult train_naive(const ResponseSetting& setting, const Dataset& dataset,
                        double lambda_reg, const OptimizerConfig& opt,
                        double temperature) {
  ResponseSetting with_temp = setting;
  with_temp.smoothing_temperature = temperature;
  return train_soft(StrategicLoss::NaiveHinge, with_temp, dataset, lambda_reg, opt);
}

PpeTrainResult train_ppe(const PpeDataset& dataset, double lambda_reg,
                         const OptimizerConfig& opt, Eigen::Index l, Eigen::Index d,
                         double lambda_d, double temperature) {
  if (dataset.empty()) throw std::invalid_argument("train_ppe: empty dataset");
  for (const auto& ex : dataset) {
    if (ex.history.size() == 0) {
      throw std::invalid_argument("train_ppe: every example needs a non-empty history");
    }
  }
  auto fn = [&](const Vec& flat, std::size_t i) {
    const PpeExample& ex = dataset[i];
    BilinearModel model{Eigen::Map<const Mat>(flat.data(), l, d)};
    LossGradW lw = gs_hinge_ppe(model, ex.x, ex.history, ex.item, ex.y, lambda_d, temperature);
    return LossGrad{lw.value, Eigen::Map<const Vec>(lw.grad.data(), l * d)};
  };
  auto [flat, trace] = adam_minimize(l * d, dataset.size(), fn, lambda_reg, opt,
                                     small_random_init(l * d, opt.seed));
  return {BilinearModel{Eigen::Map<const Mat>(flat.data(), l, d)}, trace.back(),
          std::move(trace)};
}

PpeTrainResult train_ppe_standard(const PpeDataset& dataset, double lambda_reg,
                                  const OptimizerConfig& opt, Eigen::Index l,
                                  Eigen::Index d) {
  if (dataset.empty()) throw std::invalid_argument("train_ppe_standard: empty dataset");
  auto fn = [&](const Vec& flat, std::size_t i) {
    const PpeExample& ex = dataset[i];
    Eigen::Map<const Mat> W(flat.data(), l, d);
    double margin = ex.y * ex.item.dot(W * ex.x);
    if (margin >= 1.0) return LossGrad{0.0, Vec::Zero(l * d)};
    Mat grad = -static_cast<double>(ex.y) * ex.item * ex.x.transpose();
    return LossGrad{1.0 - margin, Eigen::Map<const Vec>(grad.data(), l * d)};
  };
  auto [flat, trace] = adam_minimize(l * d, dataset.size(), fn, lambda_reg, opt,
                                     small_random_init(l * d, opt.seed));
  return {BilinearModel{Eigen::Map<const Mat>(flat.data(), l, d)}, trace.back(),
          std::move(trace)};
}

double cross_validate(
    const std::function<double(const Dataset&, const Dataset&, double)>& fit_score,
    const Dataset& dataset, std::vector<double> lambdas, int folds) {
  if (folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
  if (dataset.size() < static_cast<std::size_t>(folds)) {
    throw std::invalid_argument("cross_validate: dataset smaller than fold count");
  }
  if (lambdas.empty()) throw std::invalid_argument("cross_validate: empty lambda grid");
  std::sort(lambdas.begin(), lambdas.end());

  auto single_class = [](const Dataset& ds) {
    for (const auto& ex : ds) {
      if (ex.y != ds.front().y) return false;
    }
    return true;
  };

  double best_lambda = lambdas.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (double lambda : lambdas) {
    double total = 0.0;
    int used = 0;
    for (int f = 0; f < folds; ++f) {
      Dataset train, val;
      for (std::size_t i = 0; i < dataset.size(); ++i) {
        (static_cast<int>(i % folds) == f ? val : train).push_back(dataset[i]);
      }
      if (train.empty() || val.empty() || single_class(train)) {
        std::cerr << "cross_validate: skipping degenerate fold " << f << "\n";
        continue;
      }
      total += fit_score(train, val, lambda);
      ++used;
    }
    if (used == 0) continue;
    double mean = total / used;
    if (mean > best_score) {  // strict: ties keep the smaller lambda
      best_score = mean;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

EvalReport evaluate(const ResponseSetting& setting, const LinearModel& model,
                    const Dataset& dataset) {
  if (dataset.empty()) throw std::invalid_argument("evaluate: empty dataset");
  EvalReport report;
  std::map<int, std::size_t> strategic_hits, raw_hits;
  for (const auto& ex : dataset) {
    int strat = post_response_label(setting, model, ex);
    int raw = sign_pred(dot(model.w, ex.x));
    auto& cls = report.per_class[ex.y];
    ++cls.count;
    if (strat == ex.y) ++strategic_hits[ex.y];
    if (raw == ex.y) ++raw_hits[ex.y];
  }
  std::size_t strat_total = 0, raw_total = 0;
  for (auto& [label, cls] : report.per_class) {
    cls.strategic_accuracy = static_cast<double>(strategic_hits[label]) / cls.count;
    cls.raw_accuracy = static_cast<double>(raw_hits[label]) / cls.count;
    strat_total += strategic_hits[label];
    raw_total += raw_hits[label];
  }
  report.strategic_accuracy = static_cast<double>(strat_total) / dataset.size();
  report.raw_accuracy = static_cast<double>(raw_total) / dataset.size();
  return report;
}

EvalReport evaluate(const ResponseSetting& setting, const BilinearModel& model,
                    const PpeDataset& dataset) {
  if (dataset.empty()) throw std::invalid_argument("evaluate: empty dataset");
  EvalReport report;
  std::map<int, std::size_t> strategic_hits, raw_hits;
  for (const auto& ex : dataset) {
    int strat = post_response_label(setting, model, ex);
    int raw = sign_pred(ex.item.dot(model.W * ex.x));
    auto& cls = report.per_class[ex.y];
    ++cls.count;
    if (strat == ex.y) ++strategic_hits[ex.y];
    if (raw == ex.y) ++raw_hits[ex.y];
  }
  std::size_t strat_total = 0, raw_total = 0;
  for (auto& [label, cls] : report.per_class) {
    cls.strategic_accuracy = static_cast<double>(strategic_hits[label]) / cls.count;
    cls.raw_accuracy = static_cast<double>(raw_hits[label]) / cls.count;
    strat_total += strategic_hits[label];
    raw_total += raw_hits[label];
  }
  report.strategic_accuracy = static_cast<double>(strat_total) / dataset.size();
  report.raw_accuracy = static_cast<double>(raw_total) / dataset.size();
  return report;
}

}  // namespace gsc
