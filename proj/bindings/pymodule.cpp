#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gsc/analysis.hpp"
#include "gsc/datagen.hpp"
#include "gsc/errors.hpp"
#include "gsc/experiments.hpp"
#include "gsc/losses.hpp"
#include "gsc/margins.hpp"
#include "gsc/solvers.hpp"

namespace py = pybind11;
using namespace gsc;

namespace {

ResponseSetting make_setting(const std::string& kind, double epsilon,
                             const std::string& ppe_user_loss) {
  SettingKind k = setting_kind_from_string(kind);
  switch (k) {
    case SettingKind::SC: return ResponseSetting::sc();
    case SettingKind::NL: return ResponseSetting::nl(epsilon);
    case SettingKind::GP: return ResponseSetting::gp();
    case SettingKind::ADV: return ResponseSetting::adv();
    case SettingKind::NOISE: return ResponseSetting::noise();
    case SettingKind::PPE:
      return ResponseSetting::ppe(ppe_user_loss_from_string(ppe_user_loss));
  }
  return ResponseSetting::sc();
}

Dataset dataset_from_arrays(const Mat& X, const std::vector<int>& z,
                            const std::vector<int>& y) {
  if (static_cast<std::size_t>(X.rows()) != y.size() || y.size() != z.size()) {
    throw std::invalid_argument("dataset arrays must have matching lengths");
  }
  Dataset data;
  data.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    data.push_back({X.row(i).transpose(), TargetLabel{z[i]}, y[i]});
  }
  return data;
}

}  // namespace

PYBIND11_MODULE(_gsc, m) {
  m.doc() = "Strategic classification core: response mappings, strategic margins "
            "and hinges, trainers and bound constants";

  py::register_exception<NumericError>(m, "NumericError");
  py::register_exception<DataError>(m, "DataError");

  // response mappings
  m.def("respond_gp_exact",
        [](const Vec& w, const Vec& x, int target, double eta, double budget) {
          return respond_gp_exact(LinearModel{w}, x, target, eta, budget);
        },
        py::arg("w"), py::arg("x"), py::arg("target"), py::arg("eta") = 1e-9,
        py::arg("budget") = 2.0);
  m.def("respond_gp_smoothed",
        [](const Vec& w, const Vec& x, int target, double temperature, double budget) {
          return respond_gp_smoothed(LinearModel{w}, x, target, temperature, budget);
        },
        py::arg("w"), py::arg("x"), py::arg("target"), py::arg("temperature") = 1.0,
        py::arg("budget") = 2.0);
  m.def("respond_noise",
        [](const Vec& theta, const Vec& x, const Vec& z) {
          return respond_noise(LinearModel{theta}, x, z);
        },
        py::arg("theta"), py::arg("x"), py::arg("z"));
  m.def("respond_ppe_squared",
        [](const Mat& W, const Vec& x, const Mat& items, const Vec& labels) {
          return respond_ppe_squared(BilinearModel{W}, x, History{items, labels});
        },
        py::arg("W"), py::arg("x"), py::arg("items"), py::arg("labels"));
  m.def("respond_ppe_iterative",
        [](const Mat& W, const Vec& x, const Mat& items, const Vec& labels,
           const std::string& user_loss, int steps, double lr) {
          return respond_ppe_iterative(BilinearModel{W}, x, History{items, labels},
                                       ppe_user_loss_from_string(user_loss), steps, lr);
        },
        py::arg("W"), py::arg("x"), py::arg("items"), py::arg("labels"),
        py::arg("user_loss") = "hinge", py::arg("steps") = 100, py::arg("lr") = 0.05);

  // strategic geometry
  m.def("flipping_cost",
        [](const Vec& w, const Vec& x) { return flipping_cost(LinearModel{w}, x); });
  m.def("in_flip_set",
        [](const Vec& w, const Vec& x) { return in_flip_set(LinearModel{w}, x); });
  m.def("strategic_distance_gp", [](const Vec& w, const Vec& x, int z) {
    return strategic_distance_gp(LinearModel{w}, x, z);
  });
  m.def("strategic_margin_nl",
        [](const Vec& w, const Mat& X, const std::vector<int>& z, const std::vector<int>& y) {
          return strategic_margin_nl(LinearModel{w}, dataset_from_arrays(X, z, y));
        });

  // losses
  m.def("hinge_standard", [](const Vec& w, const Vec& x, int y) {
    LossGrad lg = hinge_standard(LinearModel{w}, x, y);
    return py::make_tuple(lg.value, lg.grad);
  });
  m.def("s_hinge_gp", [](const Vec& w, const Vec& x, int z, int y) {
    LossGrad lg = s_hinge_gp(LinearModel{w}, x, z, y);
    return py::make_tuple(lg.value, lg.grad);
  });
  m.def("hinge_naive",
        [](const std::string& kind, const Vec& w, const Vec& x, int z, int y,
           double temperature) {
          Example ex{x, TargetLabel{z}, y};
          LossGrad lg = hinge_naive(make_setting(kind, 0.0, "squared"), LinearModel{w}, ex,
                                    temperature);
          return py::make_tuple(lg.value, lg.grad);
        },
        py::arg("kind"), py::arg("w"), py::arg("x"), py::arg("z"), py::arg("y"),
        py::arg("temperature") = 1.0);
  m.def("gs_hinge_ppe",
        [](const Mat& W, const Vec& x, const Mat& items, const Vec& labels, const Vec& item,
           int y, double lambda_d, double temperature) {
          LossGradW lg = gs_hinge_ppe(BilinearModel{W}, x, History{items, labels}, item, y,
                                      lambda_d, temperature);
          return py::make_tuple(lg.value, lg.grad);
        },
        py::arg("W"), py::arg("x"), py::arg("items"), py::arg("labels"), py::arg("item"),
        py::arg("y"), py::arg("lambda_d") = 0.01, py::arg("temperature") = 1.0);
  m.def("strategic_zero_one", [](const std::string& kind, double epsilon, const Vec& w,
                                 const Vec& x, int z, int y) {
    Example ex{x, TargetLabel{z}, y};
    return strategic_zero_one(make_setting(kind, epsilon, "squared"), LinearModel{w}, ex);
  });

  // bounds
  m.def("bound_rho", [](const std::string& subclass, double r, double epsilon) {
    return bound_rho(bound_subclass_from_string(subclass), r, epsilon);
  }, py::arg("subclass"), py::arg("r"), py::arg("epsilon") = 0.0);
  m.def("bound_value",
        [](const std::string& subclass, double empirical_loss, double w_norm, double r,
           double m_count, double delta, double epsilon) {
          return bound_value(bound_subclass_from_string(subclass), empirical_loss, w_norm,
                             r, m_count, delta, epsilon);
        },
        py::arg("subclass"), py::arg("empirical_loss"), py::arg("w_norm"), py::arg("r"),
        py::arg("m"), py::arg("delta"), py::arg("epsilon") = 0.0);

  // training and evaluation on array-shaped datasets
  m.def("train_soft",
        [](const std::string& loss, const std::string& kind, const Mat& X,
           const std::vector<int>& z, const std::vector<int>& y, double lambda_reg,
           int epochs, int batch_size, double step_size, std::uint64_t seed) {
          OptimizerConfig opt;
          opt.epochs = epochs;
          opt.batch_size = batch_size;
          opt.step_size = step_size;
          opt.seed = seed;
          StrategicLoss sl;
          if (loss == "s-hinge") sl = StrategicLoss::GpSHinge;
          else if (loss == "naive") sl = StrategicLoss::NaiveHinge;
          else if (loss == "standard") sl = StrategicLoss::StandardHinge;
          else throw std::invalid_argument("unknown loss: " + loss);
          TrainResult r = train_soft(sl, make_setting(kind, 0.0, "squared"),
                                     dataset_from_arrays(X, z, y), lambda_reg, opt);
          py::dict out;
          out["w"] = r.model.w;
          out["final_objective"] = r.final_objective;
          out["objective_trace"] = r.objective_trace;
          return out;
        },
        py::arg("loss"), py::arg("kind"), py::arg("X"), py::arg("z"), py::arg("y"),
        py::arg("lambda_reg") = 0.01, py::arg("epochs") = 200, py::arg("batch_size") = 5,
        py::arg("step_size") = 0.05, py::arg("seed") = 0);
  m.def("train_hard",
        [](const Mat& X, const std::vector<int>& z, const std::vector<int>& y,
           double tolerance, int epochs, std::uint64_t seed) {
          OptimizerConfig opt;
          opt.epochs = epochs;
          opt.seed = seed;
          TrainResult r = train_hard(ResponseSetting::nl(0.0), dataset_from_arrays(X, z, y),
                                     tolerance, opt);
          py::dict out;
          out["w"] = r.model.w;
          out["feasible"] = r.feasible;
          out["max_violation"] = r.max_violation;
          return out;
        },
        py::arg("X"), py::arg("z"), py::arg("y"), py::arg("tolerance") = 1e-3,
        py::arg("epochs") = 200, py::arg("seed") = 0);
  m.def("evaluate",
        [](const std::string& kind, double epsilon, const Vec& w, const Mat& X,
           const std::vector<int>& z, const std::vector<int>& y) {
          EvalReport rep = evaluate(make_setting(kind, epsilon, "squared"), LinearModel{w},
                                    dataset_from_arrays(X, z, y));
          py::dict out;
          out["strategic_accuracy"] = rep.strategic_accuracy;
          out["raw_accuracy"] = rep.raw_accuracy;
          return out;
        },
        py::arg("kind"), py::arg("epsilon"), py::arg("w"), py::arg("X"), py::arg("z"),
        py::arg("y"));

  // generators
  m.def("gen_varying_eps",
        [](std::uint64_t seed, double epsilon, int n_train, int n_test) {
          SplitDataset d = gen_varying_eps(seed, epsilon, n_train, n_test);
          auto pack = [](const Dataset& ds) {
            Mat X(ds.size(), ds.front().x.size());
            std::vector<int> z(ds.size()), y(ds.size());
            for (std::size_t i = 0; i < ds.size(); ++i) {
              X.row(i) = ds[i].x.transpose();
              z[i] = target_of(ds[i].z);
              y[i] = ds[i].y;
            }
            return py::make_tuple(X, z, y);
          };
          return py::make_tuple(pack(d.train), pack(d.test));
        },
        py::arg("seed"), py::arg("epsilon"), py::arg("n_train") = 50,
        py::arg("n_test") = 1250);
  m.def("gen_generalization_env",
        [](const std::string& env, std::uint64_t seed, int n_train, int n_test) {
          SplitDataset d =
              gen_generalization_env(env_from_string(env), seed, n_train, n_test);
          auto pack = [](const Dataset& ds) {
            Mat X(ds.size(), ds.front().x.size());
            std::vector<int> z(ds.size()), y(ds.size());
            for (std::size_t i = 0; i < ds.size(); ++i) {
              X.row(i) = ds[i].x.transpose();
              z[i] = target_of(ds[i].z);
              y[i] = ds[i].y;
            }
            return py::make_tuple(X, z, y);
          };
          return py::make_tuple(pack(d.train), pack(d.test));
        },
        py::arg("env"), py::arg("seed"), py::arg("n_train") = 25, py::arg("n_test") = 1250);

  m.attr("__version__") = "0.1.0";
}
