#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gsc/csvio.hpp"
#include "gsc/errors.hpp"
#include "gsc/experiments.hpp"

namespace {

// Shared flag wiring: every option also reads from a CLI11 config file, and
// --from-sidecar replays the exact parameters of a previous run.
void add_common(CLI::App* cmd, std::string* sidecar) {
  cmd->set_config("--config", "", "read options from a key=value config file");
  cmd->add_option("--from-sidecar", *sidecar,
                  "rerun with the parameters recorded in a result sidecar");
}

template <typename Config>
Config with_sidecar(const std::string& sidecar_path, const Config& cli_config) {
  if (sidecar_path.empty()) return cli_config;
  nlohmann::json j = gsc::read_sidecar(sidecar_path);
  Config config = Config::from_json(j);
  if constexpr (requires { config.out_dir; }) {
    config.out_dir = cli_config.out_dir;  // let reruns target a fresh directory
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategic classification toolkit: response mappings, strategic "
               "hinge training, incentive-alignment analysis and experiments"};
  app.require_subcommand(1);

  gsc::GenDataConfig gen_cfg;
  std::string gen_sidecar;
  auto* gen = app.add_subcommand("gen-data", "generate dataset CSVs");
  gen->add_option("--kind", gen_cfg.kind, "env | varying-eps | ppe-synthetic");
  gen->add_option("--env", gen_cfg.env, "NL | ADV | SC | SC_HARD");
  gen->add_option("--epsilon", gen_cfg.epsilon, "label-estimate flip rate");
  gen->add_option("--seed", gen_cfg.seed);
  gen->add_option("--n-train", gen_cfg.n_train);
  gen->add_option("--n-test", gen_cfg.n_test);
  gen->add_option("--history-size", gen_cfg.history_size);
  gen->add_option("--out", gen_cfg.out_dir);
  add_common(gen, &gen_sidecar);

  gsc::TrainConfig train_cfg;
  std::string train_sidecar;
  auto* train = app.add_subcommand("train", "train a linear model");
  train->add_option("--env", train_cfg.env, "NL | ADV | SC | SC_HARD | VARYING_EPS");
  train->add_option("--epsilon", train_cfg.epsilon);
  train->add_option("--data", train_cfg.data_dir, "directory with train.csv/test.csv");
  train->add_option("--loss", train_cfg.loss, "s-hinge | naive | standard");
  train->add_option("--seed", train_cfg.seed);
  train->add_option("--lambda", train_cfg.lambda_reg, "0 cross-validates {0.01,0.1,1}");
  train->add_option("--epochs", train_cfg.epochs);
  train->add_option("--batch", train_cfg.batch_size);
  train->add_option("--step-size", train_cfg.step_size);
  train->add_option("--out", train_cfg.out_dir);
  add_common(train, &train_sidecar);

  gsc::EvalConfig eval_cfg;
  std::string eval_sidecar;
  auto* eval = app.add_subcommand("eval", "evaluate a saved model");
  eval->add_option("--model", eval_cfg.model_path)->required();
  eval->add_option("--env", eval_cfg.env);
  eval->add_option("--epsilon", eval_cfg.epsilon);
  eval->add_option("--data", eval_cfg.data_dir);
  eval->add_option("--seed", eval_cfg.seed);
  eval->add_option("--out", eval_cfg.out_dir);
  add_common(eval, &eval_sidecar);

  gsc::EpsilonSweepConfig sweep_cfg;
  std::string sweep_sidecar;
  auto* sweep = app.add_subcommand("sweep-epsilon",
                                   "incentive alignment across label noise");
  sweep->add_option("--seed", sweep_cfg.seed);
  sweep->add_option("--seeds", sweep_cfg.n_seeds);
  sweep->add_option("--epsilon", sweep_cfg.epsilons, "grid values in [0, 0.5]");
  sweep->add_option("--epochs", sweep_cfg.epochs);
  sweep->add_option("--batch", sweep_cfg.batch_size);
  sweep->add_option("--lambda", sweep_cfg.lambdas);
  sweep->add_option("--threads", sweep_cfg.threads);
  sweep->add_option("--out", sweep_cfg.out_dir);
  add_common(sweep, &sweep_sidecar);

  gsc::GeneralizationConfig gener_cfg;
  std::string gener_sidecar;
  auto* gener = app.add_subcommand("experiment-generalization",
                                   "sample-efficiency comparison of the hinge variants");
  gener->add_option("--env", gener_cfg.env, "NL | ADV | SC | SC_HARD");
  gener->add_option("--seed", gener_cfg.seed);
  gener->add_option("--seeds", gener_cfg.n_seeds);
  gener->add_option("--epochs", gener_cfg.epochs);
  gener->add_option("--batch", gener_cfg.batch_size);
  gener->add_option("--lambda", gener_cfg.lambdas);
  gener->add_option("--temperature", gener_cfg.temperature);
  gener->add_option("--threads", gener_cfg.threads);
  gener->add_option("--out", gener_cfg.out_dir);
  add_common(gener, &gener_sidecar);

  gsc::PpeExperimentConfig ppe_cfg;
  std::string ppe_sidecar;
  auto* ppe = app.add_subcommand("experiment-ppe",
                                 "personalized-experiences recommendation study");
  ppe->add_flag("--synthetic", ppe_cfg.synthetic, "use the synthetic generator");
  ppe->add_option("--users", ppe_cfg.users_csv);
  ppe->add_option("--items", ppe_cfg.items_csv);
  ppe->add_option("--ratings", ppe_cfg.ratings_csv);
  ppe->add_option("--rating-threshold", ppe_cfg.rating_threshold);
  ppe->add_option("--seed", ppe_cfg.seed);
  ppe->add_option("--seeds", ppe_cfg.n_seeds);
  ppe->add_option("--history-sizes", ppe_cfg.history_sizes);
  ppe->add_option("--epochs", ppe_cfg.epochs);
  ppe->add_option("--batch", ppe_cfg.batch_size);
  ppe->add_option("--lambda", ppe_cfg.lambda_reg);
  ppe->add_option("--lambda-d", ppe_cfg.lambda_d);
  ppe->add_option("--label-noise", ppe_cfg.label_noise);
  ppe->add_option("--threads", ppe_cfg.threads);
  ppe->add_option("--out", ppe_cfg.out_dir);
  add_common(ppe, &ppe_sidecar);

  gsc::BoundConfig bound_cfg;
  std::string bound_sidecar;
  auto* bound = app.add_subcommand("bound", "generalization-bound constants");
  bound->add_option("--r", bound_cfg.r, "feature-norm radius (>= 2)");
  bound->add_option("--m", bound_cfg.m, "sample count");
  bound->add_option("--delta", bound_cfg.delta);
  bound->add_option("--wnorm", bound_cfg.w_norm);
  bound->add_option("--lhat", bound_cfg.empirical_loss);
  bound->add_option("--epsilon", bound_cfg.epsilon);
  add_common(bound, &bound_sidecar);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      std::cout << gsc::run_gen_data(with_sidecar(gen_sidecar, gen_cfg)) << "\n";
    } else if (train->parsed()) {
      std::cout << gsc::run_train(with_sidecar(train_sidecar, train_cfg)) << "\n";
    } else if (eval->parsed()) {
      std::cout << gsc::run_eval(with_sidecar(eval_sidecar, eval_cfg)) << "\n";
    } else if (sweep->parsed()) {
      std::cout << gsc::run_sweep_epsilon(with_sidecar(sweep_sidecar, sweep_cfg)) << "\n";
    } else if (gener->parsed()) {
      std::cout << gsc::run_experiment_generalization(with_sidecar(gener_sidecar, gener_cfg))
                << "\n";
    } else if (ppe->parsed()) {
      std::cout << gsc::run_experiment_ppe(with_sidecar(ppe_sidecar, ppe_cfg)) << "\n";
    } else if (bound->parsed()) {
      std::cout << gsc::render_bound_table(with_sidecar(bound_sidecar, bound_cfg));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const gsc::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const gsc::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
