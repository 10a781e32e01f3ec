#include "gsc/margins.hpp"

#include <cmath>
#include <stdexcept>

namespace gsc {

double flipping_cost(const LinearModel& model, const Vec& x) {
  return std::abs(dot(model.w, x)) / model.norm_checked();
}

bool in_flip_set(const LinearModel& model, const Vec& x, double budget) {
  return flipping_cost(model, x) <= budget;
}

double strategic_distance_gp(const LinearModel& model, const Vec& x, int z) {
  double wn = model.norm_checked();
  return std::abs(dot(model.w, x) / wn + 2.0 * z);
}

double strategic_distance_generic(const ResponseSetting& setting, const LinearModel& model,
                                  const Vec& x, const SideInfo& z,
                                  const GridSearchParams& params) {
  const Eigen::Index d = x.size();
  if (d > 3) throw std::invalid_argument("strategic_distance_generic: grid search needs d <= 3");
  Example probe{x, z, +1};
  const int base = post_response_label(setting, model, probe);
  const auto steps = static_cast<Eigen::Index>(std::floor(2.0 * params.bound / params.step)) + 1;
  double best = kInfiniteDistance;

  Vec g(d);
  std::vector<Eigen::Index> idx(d, 0);
  bool done = false;
  while (!done) {
    for (Eigen::Index k = 0; k < d; ++k) g[k] = -params.bound + idx[k] * params.step;
    probe.x = g;
    if (post_response_label(setting, model, probe) != base) {
      best = std::min(best, (x - g).norm());
    }
    // odometer increment
    Eigen::Index k = 0;
    for (; k < d; ++k) {
      if (++idx[k] < steps) break;
      idx[k] = 0;
    }
    done = (k == d);
  }
  return best;
}

double strategic_margin_nl(const LinearModel& model, const Dataset& dataset) {
  if (dataset.empty()) throw std::invalid_argument("strategic_margin_nl: empty dataset");
  double wn = model.norm_checked();
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& ex : dataset) {
    double m = ex.y * (dot(model.w, ex.x) / wn + 2.0 * target_of(ex.z));
    margin = std::min(margin, m);
  }
  return margin;
}

bool is_strategically_separable(const ResponseSetting& setting, const Dataset& dataset,
                                const LinearModel& model) {
  for (const auto& ex : dataset) {
    if (post_response_label(setting, model, ex) != ex.y) return false;
  }
  return true;
}

}  // namespace gsc
