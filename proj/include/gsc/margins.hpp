#pragma once

#include <limits>

#include "gsc/response.hpp"
#include "gsc/types.hpp"

namespace gsc {

// Minimal 2-norm cost to change a point's predicted label: the euclidean
// distance to the separating hyperplane.
double flipping_cost(const LinearModel& model, const Vec& x);

// Whether x can flip its label within the movement budget (boundary included).
bool in_flip_set(const LinearModel& model, const Vec& x, double budget = 2.0);

// Closed-form strategic distance for GP-family settings: |w̄·x + 2z|.
double strategic_distance_gp(const LinearModel& model, const Vec& x, int z);

struct GridSearchParams {
  double bound = 5.0;  // search box [-bound, bound]^d
  double step = 0.01;
};

constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

// Definitional strategic distance: min ||x - x'|| over grid points x' whose
// post-response prediction differs from that of x. Returns kInfiniteDistance
// when no such point exists in the box. Test-scale only (d <= 3).
double strategic_distance_generic(const ResponseSetting& setting, const LinearModel& model,
                                  const Vec& x, const SideInfo& z,
                                  const GridSearchParams& params);

// min over samples of y_i (w̄·x_i + 2 ỹ_i); all side info must be target labels.
double strategic_margin_nl(const LinearModel& model, const Dataset& dataset);

// Whether every sample is correctly classified after responding, with boundary
// landings resolving to the user's achieved class.
bool is_strategically_separable(const ResponseSetting& setting, const Dataset& dataset,
                                const LinearModel& model);

}  // namespace gsc
