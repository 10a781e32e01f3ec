#include "gsc/response.hpp"

#include <cmath>
#include <stdexcept>

#include "gsc/errors.hpp"

namespace gsc {

int target_label(const ResponseSetting& setting, const Example& example) {
  switch (setting.kind) {
    case SettingKind::SC:
      return +1;
    case SettingKind::ADV:
      return -example.y;
    case SettingKind::NL:
    case SettingKind::GP:
      return target_of(example.z);
    default:
      throw std::invalid_argument("target_label: setting has no scalar target");
  }
}

Vec respond_gp_exact(const LinearModel& model, const Vec& x, int target,
                     double eta, double budget) {
  double wn = model.norm_checked();
  double score = dot(model.w, x);
  if (sign_pred(score) == target) return x;  // already gets the desired prediction
  double flip_cost = std::abs(score) / wn;
  if (flip_cost >= budget) return x;  // too expensive (ties stay put)
  Vec moved = x - (score / (wn * wn)) * model.w;
  if (target < 0) {
    moved -= (eta / wn) * model.w;  // cross strictly under sign(0)=+1
  } else {
    // The landing is on the boundary; nudge away any negative rounding residue
    // so the realized prediction matches sign(0) = +1.
    for (int pass = 0; pass < 3 && dot(model.w, moved) < 0.0; ++pass) {
      moved -= (dot(model.w, moved) / (wn * wn)) * model.w;
    }
    if (dot(model.w, moved) < 0.0) moved += (eta / wn) * model.w;
  }
  return moved;
}

Vec respond_gp_smoothed(const LinearModel& model, const Vec& x, int target,
                        double temperature, double budget) {
  double wn = model.norm_checked();
  double score = dot(model.w, x);
  double s = target * score / wn;
  double cond = -s * (s + budget);
  double gate = 1.0 / (1.0 + std::exp(-temperature * cond));
  return x - (score / (wn * wn)) * gate * model.w;
}

Vec respond_noise(const LinearModel& theta, const Vec& x, const Vec& z,
                  double eta, double budget) {
  if (theta.w.size() != z.size()) {
    throw std::invalid_argument("respond_noise: perturbation dimension mismatch");
  }
  LinearModel perturbed{theta.w + z};
  return respond_gp_exact(perturbed, x, +1, eta, budget);
}

Vec respond_ppe_squared(const BilinearModel& model, const Vec& x, const History& z) {
  z.validate();
  if (z.items.cols() != model.W.rows()) {
    throw std::invalid_argument("respond_ppe_squared: item/model dimension mismatch");
  }
  if (model.W.cols() != x.size()) {
    throw std::invalid_argument("respond_ppe_squared: user/model dimension mismatch");
  }
  const double n = static_cast<double>(z.size());
  Mat B = z.items * model.W;  // n x d
  Mat M = 2.0 * B.transpose() * B + n * Mat::Identity(x.size(), x.size());
  Vec rhs = 2.0 * B.transpose() * z.labels + n * x;
  return solve_spd(M, rhs);
}

Vec respond_ppe_iterative(const BilinearModel& model, const Vec& x, const History& z,
                          PpeUserLoss user_loss, int steps, double lr) {
  z.validate();
  if (z.items.cols() != model.W.rows() || model.W.cols() != x.size()) {
    throw std::invalid_argument("respond_ppe_iterative: dimension mismatch");
  }
  const double n = static_cast<double>(z.size());
  Mat B = z.items * model.W;  // n x d, row j is the user-side feature a_j^T W
  Vec cur = x;
  for (int step = 0; step < steps; ++step) {
    Vec grad = cur - x;  // movement cost term
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      double margin = z.labels[j] * B.row(j).dot(cur);
      switch (user_loss) {
        case PpeUserLoss::Squared: {
          double r = B.row(j).dot(cur) - z.labels[j];
          grad += (2.0 / n) * r * B.row(j).transpose();
          break;
        }
        case PpeUserLoss::Hinge:
          if (margin < 1.0) grad -= (z.labels[j] / n) * B.row(j).transpose();
          break;
        case PpeUserLoss::Logistic:
          grad -= (z.labels[j] / n) * std::exp(-margin) * B.row(j).transpose();
          break;
      }
    }
    cur -= lr * grad;
  }
  return cur;
}

Vec respond(const ResponseSetting& setting, const LinearModel& model, const Example& example) {
  double budget = setting.cost.budget();
  switch (setting.kind) {
    case SettingKind::SC:
    case SettingKind::NL:
    case SettingKind::GP:
    case SettingKind::ADV:
      return respond_gp_exact(model, example.x, target_label(setting, example),
                              setting.crossing_eta, budget);
    case SettingKind::NOISE:
      return respond_noise(model, example.x, noise_of(example.z), setting.crossing_eta, budget);
    default:
      throw std::invalid_argument("respond: PPE requires a bilinear model");
  }
}

Vec respond(const ResponseSetting& setting, const BilinearModel& model, const PpeExample& example) {
  if (setting.kind != SettingKind::PPE) {
    throw std::invalid_argument("respond: bilinear model requires the PPE setting");
  }
  if (example.history.size() == 0) return example.x;
  if (setting.ppe_user_loss == PpeUserLoss::Squared) {
    return respond_ppe_squared(model, example.x, example.history);
  }
  return respond_ppe_iterative(model, example.x, example.history, setting.ppe_user_loss,
                               setting.ppe_inner_steps, setting.ppe_inner_lr);
}

int post_response_label(const ResponseSetting& setting, const LinearModel& model,
                        const Example& example) {
  double budget = setting.cost.budget();
  const LinearModel* m = &model;
  LinearModel perturbed;
  int target = +1;
  if (setting.kind == SettingKind::NOISE) {
    perturbed.w = model.w + noise_of(example.z);
    m = &perturbed;
  } else {
    target = target_label(setting, example);
  }
  double wn = m->norm_checked();
  double score = dot(m->w, example.x);
  int current = sign_pred(score);
  if (current == target) return current;
  return (std::abs(score) / wn < budget) ? target : current;
}

int post_response_label(const ResponseSetting& setting, const BilinearModel& model,
                        const PpeExample& example) {
  Vec moved = respond(setting, model, example);
  return sign_pred(example.item.dot(model.W * moved));
}

}  // namespace gsc
