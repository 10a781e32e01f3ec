#include "gsc/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "gsc/linalg.hpp"
#include "gsc/margins.hpp"

namespace gsc {

double ia_lhs_estimate(const ResponseSetting& setting, const LinearModel& model,
                       const Dataset& sample) {
  if (setting.kind != SettingKind::NL) {
    throw std::invalid_argument("ia_lhs_estimate: requires the NL setting");
  }
  if (sample.empty()) throw std::invalid_argument("ia_lhs_estimate: empty sample");
  const double budget = setting.cost.budget();
  std::size_t flippable = 0;
  std::size_t err_outside = 0;
  for (const auto& ex : sample) {
    if (in_flip_set(model, ex.x, budget)) {
      ++flippable;
    } else if (sign_pred(dot(model.w, ex.x)) != ex.y) {
      ++err_outside;
    }
  }
  const double m = static_cast<double>(sample.size());
  return setting.noise_epsilon * (flippable / m) + err_outside / m;
}

double raw_error(const LinearModel& model, const Dataset& sample) {
  if (sample.empty()) throw std::invalid_argument("raw_error: empty sample");
  std::size_t errors = 0;
  for (const auto& ex : sample) {
    if (sign_pred(dot(model.w, ex.x)) != ex.y) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(sample.size());
}

IaSystemCheck ia_check_system(const ResponseSetting& setting, const LinearModel& model,
                              const Dataset& sample,
                              const std::vector<LinearModel>& baseline_models) {
  if (baseline_models.empty()) {
    throw std::invalid_argument("ia_check_system: no baseline models supplied");
  }
  double best = 1.0;
  for (const auto& baseline : baseline_models) {
    best = std::min(best, raw_error(baseline, sample));
  }
  double lhs = ia_lhs_estimate(setting, model, sample);
  return {lhs <= best, best - lhs, best};
}

bool ia_check_users(const ResponseSetting& setting, const LinearModel& model,
                    const Dataset& sample, double epsilon) {
  if (setting.kind != SettingKind::NL) {
    throw std::invalid_argument("ia_check_users: requires the NL setting");
  }
  const double budget = setting.cost.budget();
  std::size_t outside = 0;
  std::size_t err_outside = 0;
  for (const auto& ex : sample) {
    if (!in_flip_set(model, ex.x, budget)) {
      ++outside;
      if (sign_pred(dot(model.w, ex.x)) != ex.y) ++err_outside;
    }
  }
  if (outside == 0) return true;
  return static_cast<double>(err_outside) / static_cast<double>(outside) <= epsilon;
}

LinearModel best_raw_model_2d(const Dataset& sample, int n_angles) {
  if (sample.empty() || sample.front().x.size() != 2) {
    throw std::invalid_argument("best_raw_model_2d: needs a non-empty 2D sample");
  }
  LinearModel best{Vec(2)};
  best.w << 1.0, 0.0;
  double best_err = raw_error(best, sample);
  for (int i = 1; i < n_angles; ++i) {
    double theta = 2.0 * M_PI * i / n_angles;
    LinearModel cand{Vec(2)};
    cand.w << std::cos(theta), std::sin(theta);
    double err = raw_error(cand, sample);
    if (err < best_err) {
      best_err = err;
      best = cand;
    }
  }
  return best;
}

BoundSubclass bound_subclass_from_string(const std::string& s) {
  if (s == "GSC") return BoundSubclass::GSC;
  if (s == "GP") return BoundSubclass::GP;
  if (s == "SC") return BoundSubclass::SC;
  if (s == "ADV") return BoundSubclass::ADV;
  if (s == "NL") return BoundSubclass::NL;
  throw std::invalid_argument("unknown bound subclass: " + s);
}

std::string to_string(BoundSubclass c) {
  switch (c) {
    case BoundSubclass::GSC: return "GSC";
    case BoundSubclass::GP: return "GP";
    case BoundSubclass::SC: return "SC";
    case BoundSubclass::ADV: return "ADV";
    case BoundSubclass::NL: return "NL";
  }
  return "?";
}

double bound_rho(BoundSubclass subclass, double r, double epsilon) {
  switch (subclass) {
    case BoundSubclass::GSC:
      return 2.0 * r;
    case BoundSubclass::GP:
    case BoundSubclass::SC:
    case BoundSubclass::ADV:
      return r + 2.0;
    case BoundSubclass::NL:
      if (epsilon < 0.0 || epsilon > 1.0) {
        throw std::invalid_argument("bound_rho: NL needs epsilon in [0, 1]");
      }
      return r - 2.0 + 4.0 * epsilon;
  }
  return 0.0;
}

double bound_value(BoundSubclass subclass, double empirical_loss, double w_norm,
                   double r, double m, double delta, double epsilon) {
  if (m < 1.0) throw std::invalid_argument("bound_value: m must be >= 1");
  if (delta <= 0.0 || delta >= 1.0) {
    throw std::invalid_argument("bound_value: delta must be in (0, 1)");
  }
  double middle_const = (subclass == BoundSubclass::GSC) ? 8.0 : 4.0;
  double rho = bound_rho(subclass, r, epsilon);
  double log_arg = std::max(std::exp(1.0), 4.0 * w_norm / delta);
  return empirical_loss + middle_const * r * w_norm / std::sqrt(m) +
         (1.0 + 2.0 * rho * w_norm) * std::sqrt(2.0 * std::log(log_arg) / m);
}

}  // namespace gsc
