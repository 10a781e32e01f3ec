#include "gsc/types.hpp"

#include <cmath>
#include <stdexcept>

namespace gsc {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool is_label(double v) { return v == 1.0 || v == -1.0; }

}  // namespace

void History::validate() const {
  require(items.rows() > 0, "History: must be non-empty");
  require(items.rows() == labels.size(), "History: items/labels count mismatch");
  require(items.allFinite(), "History: non-finite item features");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    require(is_label(labels[i]), "History: labels must be in {-1, +1}");
  }
}

bool has_target(const SideInfo& z) { return std::holds_alternative<TargetLabel>(z); }

int target_of(const SideInfo& z) {
  const auto* t = std::get_if<TargetLabel>(&z);
  require(t != nullptr, "side info does not hold a target label");
  require(t->value == 1 || t->value == -1, "target label must be in {-1, +1}");
  return t->value;
}

const Vec& noise_of(const SideInfo& z) {
  const auto* v = std::get_if<Vec>(&z);
  require(v != nullptr, "side info does not hold a noise vector");
  return *v;
}

const History& history_of(const SideInfo& z) {
  const auto* h = std::get_if<History>(&z);
  require(h != nullptr, "side info does not hold a history");
  return *h;
}

void Example::validate() const {
  require(y == 1 || y == -1, "Example: label must be in {-1, +1}");
  require(x.allFinite(), "Example: non-finite feature vector");
  if (const auto* h = std::get_if<History>(&z)) h->validate();
}

double LinearModel::norm_checked() const {
  double n = w.norm();
  if (n <= 0.0) throw std::invalid_argument("LinearModel: zero-norm weight vector");
  return n;
}

void BilinearModel::validate() const {
  if (!W.allFinite()) throw std::invalid_argument("BilinearModel: non-finite entries");
}

void CostSpec::validate() const {
  require(weight > 0.0 && std::isfinite(weight), "CostSpec: weight must be positive");
}

void ResponseSetting::validate() const {
  cost.validate();
  require(smoothing_temperature > 0.0, "ResponseSetting: temperature must be positive");
  require(crossing_eta > 0.0, "ResponseSetting: crossing_eta must be positive");
  require(ppe_inner_steps > 0, "ResponseSetting: ppe_inner_steps must be positive");
  require(ppe_inner_lr > 0.0, "ResponseSetting: ppe_inner_lr must be positive");
  require(noise_epsilon >= 0.0 && noise_epsilon <= 1.0,
          "ResponseSetting: noise_epsilon must be in [0, 1]");
}

ResponseSetting ResponseSetting::sc() {
  ResponseSetting s;
  s.kind = SettingKind::SC;
  return s;
}

ResponseSetting ResponseSetting::nl(double epsilon) {
  ResponseSetting s;
  s.kind = SettingKind::NL;
  s.noise_epsilon = epsilon;
  return s;
}

ResponseSetting ResponseSetting::gp() {
  ResponseSetting s;
  s.kind = SettingKind::GP;
  return s;
}

ResponseSetting ResponseSetting::adv() {
  ResponseSetting s;
  s.kind = SettingKind::ADV;
  return s;
}

ResponseSetting ResponseSetting::noise() {
  ResponseSetting s;
  s.kind = SettingKind::NOISE;
  return s;
}

ResponseSetting ResponseSetting::ppe(PpeUserLoss user_loss) {
  ResponseSetting s;
  s.kind = SettingKind::PPE;
  s.cost = CostSpec{CostSpec::Kind::L2NormSquared, 0.5};
  s.ppe_user_loss = user_loss;
  return s;
}

std::string to_string(SettingKind kind) {
  switch (kind) {
    case SettingKind::SC: return "SC";
    case SettingKind::NL: return "NL";
    case SettingKind::GP: return "GP";
    case SettingKind::ADV: return "ADV";
    case SettingKind::NOISE: return "NOISE";
    case SettingKind::PPE: return "PPE";
  }
  return "?";
}

SettingKind setting_kind_from_string(const std::string& s) {
  if (s == "SC") return SettingKind::SC;
  if (s == "NL") return SettingKind::NL;
  if (s == "GP") return SettingKind::GP;
  if (s == "ADV") return SettingKind::ADV;
  if (s == "NOISE") return SettingKind::NOISE;
  if (s == "PPE") return SettingKind::PPE;
  throw std::invalid_argument("unknown setting kind: " + s);
}

std::string to_string(PpeUserLoss loss) {
  switch (loss) {
    case PpeUserLoss::Squared: return "squared";
    case PpeUserLoss::Hinge: return "hinge";
    case PpeUserLoss::Logistic: return "logistic";
  }
  return "?";
}

PpeUserLoss ppe_user_loss_from_string(const std::string& s) {
  if (s == "squared") return PpeUserLoss::Squared;
  if (s == "hinge") return PpeUserLoss::Hinge;
  if (s == "logistic") return PpeUserLoss::Logistic;
  throw std::invalid_argument("unknown ppe user loss: " + s);
}

}  // namespace gsc
