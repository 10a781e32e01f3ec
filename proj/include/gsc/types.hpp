#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gsc/linalg.hpp"

namespace gsc {

// Items a user has already experienced, with the relevance labels the user
// observed for them. Rows of `items` are item feature vectors.
struct History {
  Mat items;   // n x l
  Vec labels;  // n entries, each in {-1, +1}

  Eigen::Index size() const { return items.rows(); }
  void validate() const;
};

struct TargetLabel {
  int value;  // in {-1, +1}
};

// Private user side information. `monostate` means none.
using SideInfo = std::variant<std::monostate, TargetLabel, Vec, History>;

bool has_target(const SideInfo& z);
int target_of(const SideInfo& z);           // throws unless TargetLabel
const Vec& noise_of(const SideInfo& z);     // throws unless noise vector
const History& history_of(const SideInfo& z);  // throws unless History

struct Example {
  Vec x;
  SideInfo z;
  int y;  // in {-1, +1}

  void validate() const;
};

using Dataset = std::vector<Example>;

// One user/item pair for the personalized-experiences setting. An empty
// history means the user has no basis for strategic modification.
struct PpeExample {
  Vec x;            // user features, length d
  History history;  // may have zero rows
  Vec item;         // item features, length l
  int y;
};

using PpeDataset = std::vector<PpeExample>;

struct LinearModel {
  Vec w;

  double norm() const { return w.norm(); }
  // Throws if the weight vector has zero norm (required by normalizing ops).
  double norm_checked() const;
};

struct BilinearModel {
  Mat W;  // l x d; score of (x, item a) is a^T W x

  void validate() const;
};

struct CostSpec {
  enum class Kind { L2Norm, L2NormSquared };
  Kind kind = Kind::L2Norm;
  double weight = 0.5;  // coefficient multiplying the cost in the user objective

  // Maximal movement worth a unit utility gain under L2Norm.
  double budget() const { return 1.0 / weight; }
  void validate() const;
};

enum class SettingKind { SC, NL, GP, ADV, NOISE, PPE };

enum class PpeUserLoss { Squared, Hinge, Logistic };

// A strategic environment: which response mapping applies and with which
// parameters.
struct ResponseSetting {
  SettingKind kind = SettingKind::SC;
  CostSpec cost{};
  double smoothing_temperature = 1.0;
  PpeUserLoss ppe_user_loss = PpeUserLoss::Squared;
  int ppe_inner_steps = 100;
  double ppe_inner_lr = 0.05;
  double crossing_eta = 1e-9;
  double noise_epsilon = 0.0;  // NL: flip probability of the label estimate

  void validate() const;

  static ResponseSetting sc();
  static ResponseSetting nl(double epsilon);
  static ResponseSetting gp();
  static ResponseSetting adv();
  static ResponseSetting noise();
  static ResponseSetting ppe(PpeUserLoss user_loss = PpeUserLoss::Squared);
};

enum class StrategicLoss {
  StandardHinge,
  NaiveHinge,
  GpSHinge,
  GeneralizedGsHinge,
  PpeGsHinge,
  StrategicZeroOne,
};

std::string to_string(SettingKind kind);
SettingKind setting_kind_from_string(const std::string& s);
std::string to_string(PpeUserLoss loss);
PpeUserLoss ppe_user_loss_from_string(const std::string& s);

}  // namespace gsc
