#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "gsc/types.hpp"

namespace gsc {

enum class Env { NL, ADV, SC, SC_HARD };

Env env_from_string(const std::string& s);
std::string to_string(Env env);

struct SplitDataset {
  Dataset train;
  Dataset test;
  nlohmann::json meta;  // generator name, parameters, seed
};

struct PpeSplit {
  PpeDataset train;
  PpeDataset test;
  Eigen::Index user_dim = 0;
  Eigen::Index item_dim = 0;
  nlohmann::json meta;
};

// Four-cluster 2D mixture with noisy label estimates: ỹ = y with probability
// 1 - epsilon, flipped otherwise.
SplitDataset gen_varying_eps(std::uint64_t seed, double epsilon,
                             int n_train_per_cluster = 50,
                             int n_test_per_cluster = 1250);

// Two-cluster environments for the generalization study. Cluster means are
// recentered so that the labeling is realizable through the origin
// (classifiers carry no intercept); the shift is recorded in the metadata.
SplitDataset gen_generalization_env(Env env, std::uint64_t seed,
                                    int n_train_per_cluster = 25,
                                    int n_test_per_cluster = 1250);

struct PpeSynthConfig {
  std::uint64_t seed = 0;
  int n_users_train = 60;
  int n_users_test = 60;
  int n_items = 40;
  int user_dim = 6;
  int item_dim = 8;
  int history_size = 8;
  int n_eval_per_user = 20;
  double label_noise = 0.5;  // std of the gaussian added to the latent score
};

// Bilinear ground truth with user/item features from unit gaussians; histories
// are labeled by the same function as the evaluation pairs.
PpeSplit gen_ppe_synthetic(const PpeSynthConfig& cfg);

struct CoatsPaths {
  std::string users_csv;
  std::string items_csv;
  std::string ratings_csv;
};

// Loads the canonical users/items/ratings CSV triple, binarizes ratings at the
// threshold and splits each user's rated items into a seeded history and
// evaluation pairs. Warns when the counts are far from the expected
// 290 users / 300 items / 40 ratings per user.
PpeSplit load_coats(const CoatsPaths& paths, double rating_threshold, int history_size,
                    std::uint64_t seed, double train_fraction = 0.5);

}  // namespace gsc
