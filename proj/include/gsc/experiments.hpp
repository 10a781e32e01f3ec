#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gsc/datagen.hpp"
#include "gsc/solvers.hpp"

namespace gsc {

// Runs fn(0..n-1) on a worker pool; cell outputs must be written to
// pre-allocated slots so aggregation is order-independent.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

struct GeneralizationConfig {
  std::string env = "NL";
  std::uint64_t seed = 0;
  int n_seeds = 30;
  std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int epochs = 200;
  int batch_size = 5;
  double step_size = 0.05;
  std::vector<double> lambdas = {0.01, 0.1, 1.0};
  int cv_folds = 3;
  double temperature = 1.0;
  int threads = 1;
  std::string out_dir = "out";

  nlohmann::json to_json() const;
  static GeneralizationConfig from_json(const nlohmann::json& j);
};

// Emits generalization_<env>.csv (+ .svg, + sidecar) with one row per
// (fraction, method): fraction,method,mean_acc,se_low,se_high,n_seeds.
// Returns the CSV path.
std::string run_experiment_generalization(const GeneralizationConfig& config);

struct EpsilonSweepConfig {
  std::uint64_t seed = 0;
  int n_seeds = 30;
  std::vector<double> epsilons = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25,
                                  0.3, 0.35, 0.4, 0.45, 0.5};
  int epochs = 200;
  int batch_size = 16;
  double step_size = 0.05;
  std::vector<double> lambdas = {0.01, 0.1, 1.0};
  int cv_folds = 3;
  int threads = 1;
  std::string out_dir = "out";

  nlohmann::json to_json() const;
  static EpsilonSweepConfig from_json(const nlohmann::json& j);
};

// Emits epsilon_sweep.csv (+ .svg, + sidecar): per epsilon the strategic
// accuracy, the non-strategic optimum estimate, the user-information line and
// the incentive-alignment classification.
std::string run_sweep_epsilon(const EpsilonSweepConfig& config);

struct PpeExperimentConfig {
  bool synthetic = false;
  std::string users_csv;
  std::string items_csv;
  std::string ratings_csv;
  double rating_threshold = 3.0;  // midpoint of the 1..5 scale
  std::uint64_t seed = 0;
  int n_seeds = 10;
  std::vector<int> history_sizes = {0, 4, 8, 12, 16, 20, 24};
  std::vector<std::string> user_losses = {"squared", "hinge", "logistic"};
  int epochs = 50;
  int batch_size = 24;
  double step_size = 0.05;
  double lambda_reg = 0.01;
  double lambda_d = 0.01;
  int threads = 1;
  std::string out_dir = "out";
  // synthetic generator knobs
  int n_users = 60;
  int n_items = 40;
  int user_dim = 6;
  int item_dim = 8;
  int n_eval_per_user = 20;
  double label_noise = 0.5;

  nlohmann::json to_json() const;
  static PpeExperimentConfig from_json(const nlohmann::json& j);
};

// Emits ppe.csv (+ per-user-loss .svg, + sidecar): rows
// n,user_loss,method,mean_acc,se_low,se_high,n_seeds.
std::string run_experiment_ppe(const PpeExperimentConfig& config);

struct BoundConfig {
  double r = 5.0;
  double m = 1000.0;
  double delta = 0.05;
  double w_norm = 1.0;
  double empirical_loss = 0.1;
  double epsilon = 0.5;

  nlohmann::json to_json() const;
  static BoundConfig from_json(const nlohmann::json& j);
};

// Prints the rho table and bound values; returns the rendered text. Also
// verifies the subclass ordering chain over a grid and appends a warning line
// on any violation.
std::string render_bound_table(const BoundConfig& config);

struct GenDataConfig {
  std::string kind = "env";  // env | varying-eps | ppe-synthetic
  std::string env = "NL";
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  int n_train = 0;  // 0: generator default
  int n_test = 0;
  int history_size = 8;
  std::string out_dir = "out";

  nlohmann::json to_json() const;
  static GenDataConfig from_json(const nlohmann::json& j);
};

std::string run_gen_data(const GenDataConfig& config);

struct TrainConfig {
  std::string env = "NL";      // used when data_dir is empty
  double epsilon = 0.0;        // NL noise when generating varying-eps data
  std::string data_dir;        // reads train.csv/test.csv when set
  std::string loss = "s-hinge";  // s-hinge | naive | standard
  std::uint64_t seed = 0;
  double lambda_reg = 0.0;  // 0: cross-validate over {0.01, 0.1, 1}
  int epochs = 200;
  int batch_size = 5;
  double step_size = 0.05;
  std::string out_dir = "out";

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

std::string run_train(const TrainConfig& config);

struct EvalConfig {
  std::string model_path;
  std::string env = "NL";
  double epsilon = 0.0;
  std::string data_dir;
  std::uint64_t seed = 0;
  std::string out_dir = "out";

  nlohmann::json to_json() const;
  static EvalConfig from_json(const nlohmann::json& j);
};

std::string run_eval(const EvalConfig& config);

// Mean and percentile-based asymmetric error bars (16th/84th percentiles).
struct SeedStats {
  double mean = 0.0;
  double se_low = 0.0;
  double se_high = 0.0;
};
SeedStats seed_stats(std::vector<double> values);

// Response setting used by an environment's data.
ResponseSetting setting_for_env(Env env);

}  // namespace gsc
