#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "gsc/losses.hpp"
#include "gsc/types.hpp"

namespace gsc {

struct OptimizerConfig {
  double step_size = 0.05;
  int epochs = 200;
  int batch_size = 5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 0;
};

struct TrainResult {
  LinearModel model;
  double final_objective = 0.0;
  std::vector<double> objective_trace;
  bool feasible = true;
  double max_violation = 0.0;  // hard mode only
};

struct PpeTrainResult {
  BilinearModel model;
  double final_objective = 0.0;
  std::vector<double> objective_trace;
};

// Minimizes (1/m) sum loss_i + lambda ||w||^2 by mini-batch Adam with a fixed
// shuffle schedule derived from the seed. Throws NumericError on a NaN
// objective.
TrainResult train_soft(StrategicLoss loss, const ResponseSetting& setting,
                       const Dataset& dataset, double lambda_reg,
                       const OptimizerConfig& opt);

// Max strategic margin for separable data: continuation over decreasing
// regularization on the soft objective, stopping when every constraint
// y_i (w·x_i + 2 ỹ_i ||w||) >= 1 holds with slack <= tolerance. Returns the
// normalized direction; feasible == false (with the worst violation) when the
// schedule is exhausted.
TrainResult train_hard(const ResponseSetting& setting, const Dataset& dataset,
                       double tolerance, const OptimizerConfig& opt);

// Baseline: standard hinge applied to the smoothed response.
TrainResult train_naive(const ResponseSetting& setting, const Dataset& dataset,
                        double lambda_reg, const OptimizerConfig& opt,
                        double temperature);

// Minimizes mean gs-hinge-PPE + lambda ||W||_F^2.
PpeTrainResult train_ppe(const PpeDataset& dataset, double lambda_reg,
                         const OptimizerConfig& opt, Eigen::Index l, Eigen::Index d,
                         double lambda_d = 0.01, double temperature = 1.0);

// Baseline for PPE: standard hinge on raw (x, item, y) triples.
PpeTrainResult train_ppe_standard(const PpeDataset& dataset, double lambda_reg,
                                  const OptimizerConfig& opt, Eigen::Index l,
                                  Eigen::Index d);

// Returns the regularization weight maximizing mean held-out score over
// deterministic folds; ties resolve to the smallest weight. `fit_score` maps
// (train fold, validation fold, lambda) to a score. Folds whose training part
// is single-class are skipped with a warning.
double cross_validate(
    const std::function<double(const Dataset&, const Dataset&, double)>& fit_score,
    const Dataset& dataset, std::vector<double> lambdas = {0.01, 0.1, 1.0},
    int folds = 3);

struct ClassStats {
  std::size_t count = 0;
  double strategic_accuracy = 0.0;
  double raw_accuracy = 0.0;
};

struct EvalReport {
  double strategic_accuracy = 0.0;
  double raw_accuracy = 0.0;
  std::map<int, ClassStats> per_class;
};

EvalReport evaluate(const ResponseSetting& setting, const LinearModel& model,
                    const Dataset& dataset);
EvalReport evaluate(const ResponseSetting& setting, const BilinearModel& model,
                    const PpeDataset& dataset);

}  // namespace gsc
