#include "gsc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gsc/analysis.hpp"
#include "gsc/csvio.hpp"
#include "gsc/errors.hpp"
#include "gsc/margins.hpp"
#include "gsc/rng.hpp"
#include "gsc/svg.hpp"

namespace gsc {

namespace fs = std::filesystem;

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  pool.reserve(n_workers);
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

SeedStats seed_stats(std::vector<double> values) {
  SeedStats stats;
  if (values.empty()) return stats;
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / values.size();
  std::sort(values.begin(), values.end());
  auto percentile = [&](double p) {
    double pos = p * (values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - lo;
    return values[lo] * (1.0 - frac) + values[hi] * frac;
  };
  stats.se_low = std::max(0.0, stats.mean - percentile(0.16));
  stats.se_high = std::max(0.0, percentile(0.84) - stats.mean);
  return stats;
}

ResponseSetting setting_for_env(Env env) {
  switch (env) {
    case Env::NL: return ResponseSetting::nl(0.0);
    case Env::ADV: return ResponseSetting::adv();
    case Env::SC:
    case Env::SC_HARD: return ResponseSetting::sc();
  }
  return ResponseSetting::sc();
}

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory: " + dir);
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  return out;
}

Dataset shuffled_prefix(const Dataset& data, double fraction, Rng rng) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::size_t count = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::lround(fraction * data.size())));
  count = std::min(count, data.size());
  Dataset out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(data[order[i]]);
  return out;
}

// Cross-validated soft training for one of the linear methods.
LinearModel fit_linear_cv(StrategicLoss loss, const ResponseSetting& setting,
                          const Dataset& train, const std::vector<double>& lambdas,
                          int folds, const OptimizerConfig& opt, bool score_strategic) {
  auto fit_score = [&](const Dataset& tr, const Dataset& va, double lambda) {
    TrainResult r = train_soft(loss, setting, tr, lambda, opt);
    EvalReport rep = evaluate(setting, r.model, va);
    return score_strategic ? rep.strategic_accuracy : rep.raw_accuracy;
  };
  double lambda = lambdas.size() == 1
                      ? lambdas.front()
                      : cross_validate(fit_score, train, lambdas, folds);
  return train_soft(loss, setting, train, lambda, opt).model;
}

}  // namespace

// ---------------------------------------------------------------------------
// Generalization experiment
// ---------------------------------------------------------------------------

nlohmann::json GeneralizationConfig::to_json() const {
  return {{"command", "experiment-generalization"},
          {"env", env},
          {"seed", seed},
          {"n_seeds", n_seeds},
          {"fractions", fractions},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"step_size", step_size},
          {"lambdas", lambdas},
          {"cv_folds", cv_folds},
          {"temperature", temperature},
          {"threads", threads},
          {"out_dir", out_dir}};
}

GeneralizationConfig GeneralizationConfig::from_json(const nlohmann::json& j) {
  GeneralizationConfig c;
  c.env = j.value("env", c.env);
  c.seed = j.value("seed", c.seed);
  c.n_seeds = j.value("n_seeds", c.n_seeds);
  c.fractions = j.value("fractions", c.fractions);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.step_size = j.value("step_size", c.step_size);
  c.lambdas = j.value("lambdas", c.lambdas);
  c.cv_folds = j.value("cv_folds", c.cv_folds);
  c.temperature = j.value("temperature", c.temperature);
  c.threads = j.value("threads", c.threads);
  c.out_dir = j.value("out_dir", c.out_dir);
  return c;
}

namespace {

const char* kGenMethods[] = {"s-hinge", "naive", "standard", "non-strategic"};

}  // namespace

std::string run_experiment_generalization(const GeneralizationConfig& config) {
  const Env env = env_from_string(config.env);
  const ResponseSetting setting = setting_for_env(env);
  ensure_dir(config.out_dir);

  const std::size_t n_fractions = config.fractions.size();
  // accs[seed][fraction][method]
  std::vector<std::vector<std::array<double, 4>>> accs(
      config.n_seeds, std::vector<std::array<double, 4>>(n_fractions));

  parallel_for(config.n_seeds, config.threads, [&](std::size_t seed_idx) {
    const std::uint64_t cell_seed = config.seed + seed_idx;
    SplitDataset data = gen_generalization_env(env, cell_seed);
    OptimizerConfig opt;
    opt.step_size = config.step_size;
    opt.epochs = config.epochs;
    opt.batch_size = config.batch_size;
    opt.seed = cell_seed;

    for (std::size_t fi = 0; fi < n_fractions; ++fi) {
      Dataset subset = shuffled_prefix(data.train, config.fractions[fi],
                                       Rng(cell_seed).split(900 + fi));
      LinearModel s_hinge = fit_linear_cv(StrategicLoss::GpSHinge, setting, subset,
                                          config.lambdas, config.cv_folds, opt, true);
      ResponseSetting naive_setting = setting;
      naive_setting.smoothing_temperature = config.temperature;
      LinearModel naive = fit_linear_cv(StrategicLoss::NaiveHinge, naive_setting, subset,
                                        config.lambdas, config.cv_folds, opt, true);
      LinearModel standard = fit_linear_cv(StrategicLoss::StandardHinge, setting, subset,
                                           config.lambdas, config.cv_folds, opt, false);

      accs[seed_idx][fi][0] = evaluate(setting, s_hinge, data.test).strategic_accuracy;
      accs[seed_idx][fi][1] = evaluate(setting, naive, data.test).strategic_accuracy;
      EvalReport std_rep = evaluate(setting, standard, data.test);
      accs[seed_idx][fi][2] = std_rep.strategic_accuracy;
      accs[seed_idx][fi][3] = std_rep.raw_accuracy;
    }
  });

  const std::string csv_path = config.out_dir + "/generalization_" + config.env + ".csv";
  auto out = open_csv(csv_path);
  out << "fraction,method,mean_acc,se_low,se_high,n_seeds\n";
  PlotSpec plot;
  plot.title = "Generalization (" + config.env + ")";
  plot.x_label = "training fraction";
  plot.y_label = "test strategic accuracy";
  plot.series.resize(4);
  for (int m = 0; m < 4; ++m) plot.series[m].name = kGenMethods[m];
  plot.series[3].name = "non-strategic (raw eval)";

  for (std::size_t fi = 0; fi < n_fractions; ++fi) {
    for (int m = 0; m < 4; ++m) {
      std::vector<double> values;
      values.reserve(config.n_seeds);
      for (int s = 0; s < config.n_seeds; ++s) values.push_back(accs[s][fi][m]);
      SeedStats st = seed_stats(std::move(values));
      out << format_double(config.fractions[fi]) << "," << kGenMethods[m] << ","
          << format_double(st.mean) << "," << format_double(st.se_low) << ","
          << format_double(st.se_high) << "," << config.n_seeds << "\n";
      plot.series[m].x.push_back(config.fractions[fi]);
      plot.series[m].y.push_back(st.mean);
      plot.series[m].y_low.push_back(st.mean - st.se_low);
      plot.series[m].y_high.push_back(st.mean + st.se_high);
    }
  }
  out.close();
  write_svg_plot(config.out_dir + "/generalization_" + config.env + ".svg", plot);
  write_sidecar(csv_path + ".sidecar.json", config.to_json());
  return csv_path;
}

// ---------------------------------------------------------------------------
// Epsilon sweep
// ---------------------------------------------------------------------------

nlohmann::json EpsilonSweepConfig::to_json() const {
  return {{"command", "sweep-epsilon"},
          {"seed", seed},
          {"n_seeds", n_seeds},
          {"epsilons", epsilons},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"step_size", step_size},
          {"lambdas", lambdas},
          {"cv_folds", cv_folds},
          {"threads", threads},
          {"out_dir", out_dir}};
}

EpsilonSweepConfig EpsilonSweepConfig::from_json(const nlohmann::json& j) {
  EpsilonSweepConfig c;
  c.seed = j.value("seed", c.seed);
  c.n_seeds = j.value("n_seeds", c.n_seeds);
  c.epsilons = j.value("epsilons", c.epsilons);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.step_size = j.value("step_size", c.step_size);
  c.lambdas = j.value("lambdas", c.lambdas);
  c.cv_folds = j.value("cv_folds", c.cv_folds);
  c.threads = j.value("threads", c.threads);
  c.out_dir = j.value("out_dir", c.out_dir);
  return c;
}

std::string run_sweep_epsilon(const EpsilonSweepConfig& config) {
  for (double eps : config.epsilons) {
    if (eps < 0.0 || eps > 0.5) {
      throw std::invalid_argument("sweep-epsilon: grid must lie in [0, 0.5]");
    }
  }
  ensure_dir(config.out_dir);

  struct CellResult {
    double strategic_acc = 0.0;
    double baseline_err = 0.0;
    double lhs = 0.0;
    bool ia_system = false;
    bool ia_users = false;
  };
  const std::size_t n_eps = config.epsilons.size();
  std::vector<std::vector<CellResult>> cells(n_eps,
                                             std::vector<CellResult>(config.n_seeds));

  parallel_for(n_eps * config.n_seeds, config.threads, [&](std::size_t flat) {
    const std::size_t ei = flat / config.n_seeds;
    const std::size_t si = flat % config.n_seeds;
    const double eps = config.epsilons[ei];
    const ResponseSetting setting = ResponseSetting::nl(eps);
    SplitDataset data = gen_varying_eps(config.seed + si, eps);
    OptimizerConfig opt;
    opt.step_size = config.step_size;
    opt.epochs = config.epochs;
    opt.batch_size = config.batch_size;
    opt.seed = config.seed + si;

    LinearModel s_hinge = fit_linear_cv(StrategicLoss::GpSHinge, setting, data.train,
                                        config.lambdas, config.cv_folds, opt, true);
    LinearModel standard = fit_linear_cv(StrategicLoss::StandardHinge, setting, data.train,
                                         config.lambdas, config.cv_folds, opt, false);
    LinearModel grid = best_raw_model_2d(data.train);

    CellResult& cell = cells[ei][si];
    cell.strategic_acc = evaluate(setting, s_hinge, data.test).strategic_accuracy;
    IaSystemCheck sys = ia_check_system(setting, s_hinge, data.test, {standard, grid});
    cell.baseline_err = sys.baseline_error;
    cell.lhs = ia_lhs_estimate(setting, s_hinge, data.test);
    cell.ia_system = sys.aligned;
    cell.ia_users = ia_check_users(setting, s_hinge, data.test, eps);
  });

  const std::string csv_path = config.out_dir + "/epsilon_sweep.csv";
  auto out = open_csv(csv_path);
  out << "epsilon,strategic_acc,baseline_acc,lhs_estimate,user_info,"
         "ia_system_frac,ia_users_frac,region\n";
  PlotSpec plot;
  plot.title = "Incentive alignment across label noise";
  plot.x_label = "epsilon";
  plot.y_label = "accuracy";
  plot.series.resize(3);
  plot.series[0].name = "strategic (s-hinge)";
  plot.series[1].name = "non-strategic optimum";
  plot.series[2].name = "user information (1 - eps)";

  for (std::size_t ei = 0; ei < n_eps; ++ei) {
    std::vector<double> strat, base_err, lhs;
    int sys_true = 0, users_true = 0;
    for (int s = 0; s < config.n_seeds; ++s) {
      const CellResult& cell = cells[ei][s];
      strat.push_back(cell.strategic_acc);
      base_err.push_back(cell.baseline_err);
      lhs.push_back(cell.lhs);
      sys_true += cell.ia_system ? 1 : 0;
      users_true += cell.ia_users ? 1 : 0;
    }
    SeedStats strat_stats = seed_stats(strat);
    double mean_base_err = 0.0, mean_lhs = 0.0;
    for (double v : base_err) mean_base_err += v;
    for (double v : lhs) mean_lhs += v;
    mean_base_err /= config.n_seeds;
    mean_lhs /= config.n_seeds;
    double sys_frac = static_cast<double>(sys_true) / config.n_seeds;
    double users_frac = static_cast<double>(users_true) / config.n_seeds;

    std::string region;
    if (mean_lhs <= mean_base_err) {
      region = users_frac >= 0.5 ? "IA" : "IA_tilde_better";
    } else {
      region = "not_IA";
    }
    const double eps = config.epsilons[ei];
    out << format_double(eps) << "," << format_double(strat_stats.mean) << ","
        << format_double(1.0 - mean_base_err) << "," << format_double(mean_lhs) << ","
        << format_double(1.0 - eps) << "," << format_double(sys_frac) << ","
        << format_double(users_frac) << "," << region << "\n";
    plot.series[0].x.push_back(eps);
    plot.series[0].y.push_back(strat_stats.mean);
    plot.series[1].x.push_back(eps);
    plot.series[1].y.push_back(1.0 - mean_base_err);
    plot.series[2].x.push_back(eps);
    plot.series[2].y.push_back(1.0 - eps);
  }
  out.close();
  write_svg_plot(config.out_dir + "/epsilon_sweep.svg", plot);
  write_sidecar(csv_path + ".sidecar.json", config.to_json());
  return csv_path;
}

// ---------------------------------------------------------------------------
// PPE experiment
// ---------------------------------------------------------------------------

nlohmann::json PpeExperimentConfig::to_json() const {
  return {{"command", "experiment-ppe"},
          {"synthetic", synthetic},
          {"users_csv", users_csv},
          {"items_csv", items_csv},
          {"ratings_csv", ratings_csv},
          {"rating_threshold", rating_threshold},
          {"seed", seed},
          {"n_seeds", n_seeds},
          {"history_sizes", history_sizes},
          {"user_losses", user_losses},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"step_size", step_size},
          {"lambda_reg", lambda_reg},
          {"lambda_d", lambda_d},
          {"threads", threads},
          {"out_dir", out_dir},
          {"n_users", n_users},
          {"n_items", n_items},
          {"user_dim", user_dim},
          {"item_dim", item_dim},
          {"n_eval_per_user", n_eval_per_user},
          {"label_noise", label_noise}};
}

PpeExperimentConfig PpeExperimentConfig::from_json(const nlohmann::json& j) {
  PpeExperimentConfig c;
  c.synthetic = j.value("synthetic", c.synthetic);
  c.users_csv = j.value("users_csv", c.users_csv);
  c.items_csv = j.value("items_csv", c.items_csv);
  c.ratings_csv = j.value("ratings_csv", c.ratings_csv);
  c.rating_threshold = j.value("rating_threshold", c.rating_threshold);
  c.seed = j.value("seed", c.seed);
  c.n_seeds = j.value("n_seeds", c.n_seeds);
  c.history_sizes = j.value("history_sizes", c.history_sizes);
  c.user_losses = j.value("user_losses", c.user_losses);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.step_size = j.value("step_size", c.step_size);
  c.lambda_reg = j.value("lambda_reg", c.lambda_reg);
  c.lambda_d = j.value("lambda_d", c.lambda_d);
  c.threads = j.value("threads", c.threads);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.n_users = j.value("n_users", c.n_users);
  c.n_items = j.value("n_items", c.n_items);
  c.user_dim = j.value("user_dim", c.user_dim);
  c.item_dim = j.value("item_dim", c.item_dim);
  c.n_eval_per_user = j.value("n_eval_per_user", c.n_eval_per_user);
  c.label_noise = j.value("label_noise", c.label_noise);
  return c;
}

namespace {

PpeSplit make_ppe_data(const PpeExperimentConfig& config, int history_size,
                       std::uint64_t seed) {
  if (config.synthetic) {
    PpeSynthConfig synth;
    synth.seed = seed;
    synth.n_users_train = config.n_users;
    synth.n_users_test = config.n_users;
    synth.n_items = config.n_items;
    synth.user_dim = config.user_dim;
    synth.item_dim = config.item_dim;
    synth.history_size = history_size;
    synth.n_eval_per_user = config.n_eval_per_user;
    synth.label_noise = config.label_noise;
    return gen_ppe_synthetic(synth);
  }
  if (config.users_csv.empty() || config.items_csv.empty() || config.ratings_csv.empty()) {
    throw DataError(
        "experiment-ppe: pass --synthetic or the users/items/ratings CSV paths");
  }
  CoatsPaths paths{config.users_csv, config.items_csv, config.ratings_csv};
  return load_coats(paths, config.rating_threshold, history_size, seed);
}

}  // namespace

std::string run_experiment_ppe(const PpeExperimentConfig& config) {
  ensure_dir(config.out_dir);
  const std::size_t n_hist = config.history_sizes.size();
  const std::size_t n_losses = config.user_losses.size();

  // accs[hist][seed][loss][method]; method 0 = gs-hinge, 1 = standard hinge.
  std::vector<std::vector<std::vector<std::array<double, 2>>>> accs(
      n_hist, std::vector<std::vector<std::array<double, 2>>>(
                  config.n_seeds, std::vector<std::array<double, 2>>(n_losses)));

  parallel_for(n_hist * config.n_seeds, config.threads, [&](std::size_t flat) {
    const std::size_t hi = flat / config.n_seeds;
    const std::size_t si = flat % config.n_seeds;
    const int n = config.history_sizes[hi];
    PpeSplit data = make_ppe_data(config, n, config.seed + si);

    OptimizerConfig opt;
    opt.step_size = config.step_size;
    opt.epochs = config.epochs;
    opt.batch_size = config.batch_size;
    opt.seed = config.seed + si;

    PpeTrainResult standard = train_ppe_standard(data.train, config.lambda_reg, opt,
                                                 data.item_dim, data.user_dim);
    PpeTrainResult strategic =
        n == 0 ? standard
               : train_ppe(data.train, config.lambda_reg, opt, data.item_dim,
                           data.user_dim, config.lambda_d);

    for (std::size_t li = 0; li < n_losses; ++li) {
      ResponseSetting setting =
          ResponseSetting::ppe(ppe_user_loss_from_string(config.user_losses[li]));
      accs[hi][si][li][0] =
          evaluate(setting, strategic.model, data.test).strategic_accuracy;
      accs[hi][si][li][1] =
          evaluate(setting, standard.model, data.test).strategic_accuracy;
    }
  });

  const std::string csv_path = config.out_dir + "/ppe.csv";
  auto out = open_csv(csv_path);
  out << "n,user_loss,method,mean_acc,se_low,se_high,n_seeds\n";
  const char* methods[] = {"gs-hinge", "standard-hinge"};

  std::vector<PlotSpec> plots(n_losses);
  for (std::size_t li = 0; li < n_losses; ++li) {
    plots[li].title = "PPE, " + config.user_losses[li] + "-loss users";
    plots[li].x_label = "history size n";
    plots[li].y_label = "test strategic accuracy";
    plots[li].series.resize(2);
    plots[li].series[0].name = methods[0];
    plots[li].series[1].name = methods[1];
  }

  for (std::size_t hi = 0; hi < n_hist; ++hi) {
    for (std::size_t li = 0; li < n_losses; ++li) {
      for (int m = 0; m < 2; ++m) {
        std::vector<double> values;
        for (int s = 0; s < config.n_seeds; ++s) values.push_back(accs[hi][s][li][m]);
        SeedStats st = seed_stats(std::move(values));
        out << config.history_sizes[hi] << "," << config.user_losses[li] << ","
            << methods[m] << "," << format_double(st.mean) << ","
            << format_double(st.se_low) << "," << format_double(st.se_high) << ","
            << config.n_seeds << "\n";
        plots[li].series[m].x.push_back(config.history_sizes[hi]);
        plots[li].series[m].y.push_back(st.mean);
        plots[li].series[m].y_low.push_back(st.mean - st.se_low);
        plots[li].series[m].y_high.push_back(st.mean + st.se_high);
      }
    }
  }
  out.close();
  for (std::size_t li = 0; li < n_losses; ++li) {
    write_svg_plot(config.out_dir + "/ppe_" + config.user_losses[li] + ".svg", plots[li]);
  }
  write_sidecar(csv_path + ".sidecar.json", config.to_json());
  return csv_path;
}

// ---------------------------------------------------------------------------
// Bound table
// ---------------------------------------------------------------------------

nlohmann::json BoundConfig::to_json() const {
  return {{"command", "bound"},     {"r", r},
          {"m", m},                 {"delta", delta},
          {"w_norm", w_norm},       {"empirical_loss", empirical_loss},
          {"epsilon", epsilon}};
}

BoundConfig BoundConfig::from_json(const nlohmann::json& j) {
  BoundConfig c;
  c.r = j.value("r", c.r);
  c.m = j.value("m", c.m);
  c.delta = j.value("delta", c.delta);
  c.w_norm = j.value("w_norm", c.w_norm);
  c.empirical_loss = j.value("empirical_loss", c.empirical_loss);
  c.epsilon = j.value("epsilon", c.epsilon);
  return c;
}

std::string render_bound_table(const BoundConfig& config) {
  std::ostringstream out;
  char line[160];
  out << "rho constants at r = " << config.r << ":\n";
  std::snprintf(line, sizeof(line), "  %-12s %10.6g\n", "GSC",
                bound_rho(BoundSubclass::GSC, config.r));
  out << line;
  std::snprintf(line, sizeof(line), "  %-12s %10.6g\n", "GP=SC=ADV",
                bound_rho(BoundSubclass::GP, config.r));
  out << line;
  std::snprintf(line, sizeof(line), "  %-12s %10.6g\n", "NL(eps=1/2)",
                bound_rho(BoundSubclass::NL, config.r, 0.5));
  out << line;
  std::snprintf(line, sizeof(line), "  %-12s %10.6g\n", "NL(eps=1)",
                bound_rho(BoundSubclass::NL, config.r, 1.0));
  out << line;
  std::snprintf(line, sizeof(line), "  %-12s %10.6g\n",
                ("NL(eps=" + std::to_string(config.epsilon) + ")").c_str(),
                bound_rho(BoundSubclass::NL, config.r, config.epsilon));
  out << line;

  out << "bound values (L_hat=" << config.empirical_loss << ", m=" << config.m
      << ", delta=" << config.delta << ", ||w||=" << config.w_norm
      << ", eps=" << config.epsilon << "):\n";
  for (BoundSubclass c : {BoundSubclass::GSC, BoundSubclass::GP, BoundSubclass::SC,
                          BoundSubclass::ADV, BoundSubclass::NL}) {
    double v = bound_value(c, config.empirical_loss, config.w_norm, config.r, config.m,
                           config.delta, config.epsilon);
    std::snprintf(line, sizeof(line), "  %-4s %12.6g\n", to_string(c).c_str(), v);
    out << line;
  }

  bool chain_ok = true;
  for (double r = 2.0; r <= 10.0 + 1e-9; r += 0.5) {
    for (double eps = 0.0; eps <= 1.0 + 1e-9; eps += 0.1) {
      double nl = bound_rho(BoundSubclass::NL, r, eps);
      double gp = bound_rho(BoundSubclass::GP, r);
      double gsc = bound_rho(BoundSubclass::GSC, r);
      if (eps <= 0.5 && nl > r + 1e-12) chain_ok = false;
      if (eps >= 0.5 && (nl < r - 1e-12 || nl > gp + 1e-12)) chain_ok = false;
      if (gp > gsc + 1e-12) chain_ok = false;
    }
  }
  out << "ordering chain over r in [2,10], eps in [0,1]: "
      << (chain_ok ? "holds" : "VIOLATED") << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// gen-data / train / eval commands
// ---------------------------------------------------------------------------

nlohmann::json GenDataConfig::to_json() const {
  return {{"command", "gen-data"}, {"kind", kind},
          {"env", env},            {"epsilon", epsilon},
          {"seed", seed},          {"n_train", n_train},
          {"n_test", n_test},      {"history_size", history_size},
          {"out_dir", out_dir}};
}

GenDataConfig GenDataConfig::from_json(const nlohmann::json& j) {
  GenDataConfig c;
  c.kind = j.value("kind", c.kind);
  c.env = j.value("env", c.env);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.seed = j.value("seed", c.seed);
  c.n_train = j.value("n_train", c.n_train);
  c.n_test = j.value("n_test", c.n_test);
  c.history_size = j.value("history_size", c.history_size);
  c.out_dir = j.value("out_dir", c.out_dir);
  return c;
}

std::string run_gen_data(const GenDataConfig& config) {
  ensure_dir(config.out_dir);
  nlohmann::json meta;
  if (config.kind == "env") {
    SplitDataset data = gen_generalization_env(
        env_from_string(config.env), config.seed,
        config.n_train > 0 ? config.n_train : 25, config.n_test > 0 ? config.n_test : 1250);
    write_dataset_csv(config.out_dir + "/train.csv", data.train);
    write_dataset_csv(config.out_dir + "/test.csv", data.test);
    meta = data.meta;
  } else if (config.kind == "varying-eps") {
    SplitDataset data = gen_varying_eps(config.seed, config.epsilon,
                                        config.n_train > 0 ? config.n_train : 50,
                                        config.n_test > 0 ? config.n_test : 1250);
    write_dataset_csv(config.out_dir + "/train.csv", data.train);
    write_dataset_csv(config.out_dir + "/test.csv", data.test);
    meta = data.meta;
  } else if (config.kind == "ppe-synthetic") {
    PpeSynthConfig synth;
    synth.seed = config.seed;
    synth.history_size = config.history_size;
    PpeSplit data = gen_ppe_synthetic(synth);
    write_ppe_dataset_csv(config.out_dir + "/train.csv", data.train);
    write_ppe_dataset_csv(config.out_dir + "/test.csv", data.test);
    meta = data.meta;
  } else {
    throw std::invalid_argument("gen-data: unknown kind " + config.kind);
  }
  nlohmann::json sidecar = config.to_json();
  sidecar["dataset_meta"] = meta;
  write_sidecar(config.out_dir + "/dataset.sidecar.json", sidecar);
  return config.out_dir + "/train.csv";
}

nlohmann::json TrainConfig::to_json() const {
  return {{"command", "train"},   {"env", env},
          {"epsilon", epsilon},   {"data_dir", data_dir},
          {"loss", loss},         {"seed", seed},
          {"lambda_reg", lambda_reg}, {"epochs", epochs},
          {"batch_size", batch_size}, {"step_size", step_size},
          {"out_dir", out_dir}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.env = j.value("env", c.env);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.data_dir = j.value("data_dir", c.data_dir);
  c.loss = j.value("loss", c.loss);
  c.seed = j.value("seed", c.seed);
  c.lambda_reg = j.value("lambda_reg", c.lambda_reg);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.step_size = j.value("step_size", c.step_size);
  c.out_dir = j.value("out_dir", c.out_dir);
  return c;
}

namespace {

StrategicLoss loss_from_string(const std::string& s) {
  if (s == "s-hinge") return StrategicLoss::GpSHinge;
  if (s == "naive") return StrategicLoss::NaiveHinge;
  if (s == "standard") return StrategicLoss::StandardHinge;
  throw std::invalid_argument("unknown loss: " + s);
}

std::pair<Dataset, Dataset> train_eval_data(const std::string& data_dir,
                                            const std::string& env, double epsilon,
                                            std::uint64_t seed) {
  if (!data_dir.empty()) {
    return {read_dataset_csv(data_dir + "/train.csv"),
            read_dataset_csv(data_dir + "/test.csv")};
  }
  if (env == "VARYING_EPS") {
    SplitDataset d = gen_varying_eps(seed, epsilon);
    return {std::move(d.train), std::move(d.test)};
  }
  SplitDataset d = gen_generalization_env(env_from_string(env), seed);
  return {std::move(d.train), std::move(d.test)};
}

}  // namespace

std::string run_train(const TrainConfig& config) {
  ensure_dir(config.out_dir);
  auto [train, test] = train_eval_data(config.data_dir, config.env, config.epsilon,
                                       config.seed);
  // Targets are stored per example, so GP semantics cover every environment.
  ResponseSetting setting = ResponseSetting::gp();
  OptimizerConfig opt;
  opt.step_size = config.step_size;
  opt.epochs = config.epochs;
  opt.batch_size = config.batch_size;
  opt.seed = config.seed;

  StrategicLoss loss = loss_from_string(config.loss);
  std::vector<double> lambdas =
      config.lambda_reg > 0.0 ? std::vector<double>{config.lambda_reg}
                              : std::vector<double>{0.01, 0.1, 1.0};
  LinearModel model = fit_linear_cv(loss, setting, train, lambdas, 3, opt,
                                    loss != StrategicLoss::StandardHinge);

  const std::string model_path = config.out_dir + "/model.json";
  write_model_json(model_path, model);
  EvalReport rep = evaluate(setting, model, test);
  auto out = open_csv(config.out_dir + "/train_metrics.csv");
  out << "metric,value\n";
  out << "test_strategic_accuracy," << format_double(rep.strategic_accuracy) << "\n";
  out << "test_raw_accuracy," << format_double(rep.raw_accuracy) << "\n";
  out.close();
  write_sidecar(model_path + ".sidecar.json", config.to_json());
  return model_path;
}

nlohmann::json EvalConfig::to_json() const {
  return {{"command", "eval"}, {"model_path", model_path}, {"env", env},
          {"epsilon", epsilon}, {"data_dir", data_dir},    {"seed", seed},
          {"out_dir", out_dir}};
}

EvalConfig EvalConfig::from_json(const nlohmann::json& j) {
  EvalConfig c;
  c.model_path = j.value("model_path", c.model_path);
  c.env = j.value("env", c.env);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.data_dir = j.value("data_dir", c.data_dir);
  c.seed = j.value("seed", c.seed);
  c.out_dir = j.value("out_dir", c.out_dir);
  return c;
}

std::string run_eval(const EvalConfig& config) {
  ensure_dir(config.out_dir);
  LinearModel linear;
  BilinearModel bilinear;
  if (!read_model_json(config.model_path, &linear, &bilinear)) {
    throw DataError("eval: only linear models are supported here");
  }
  auto [train, test] = train_eval_data(config.data_dir, config.env, config.epsilon,
                                       config.seed);
  (void)train;
  ResponseSetting setting = ResponseSetting::gp();
  EvalReport rep = evaluate(setting, linear, test);
  const std::string path = config.out_dir + "/eval_metrics.csv";
  auto out = open_csv(path);
  out << "metric,value\n";
  out << "strategic_accuracy," << format_double(rep.strategic_accuracy) << "\n";
  out << "raw_accuracy," << format_double(rep.raw_accuracy) << "\n";
  for (const auto& [label, cls] : rep.per_class) {
    out << "strategic_accuracy_class_" << (label > 0 ? "pos" : "neg") << ","
        << format_double(cls.strategic_accuracy) << "\n";
  }
  out.close();
  write_sidecar(path + ".sidecar.json", config.to_json());
  return path;
}

}  // namespace gsc
