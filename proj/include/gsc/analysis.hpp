#pragma once

#include "gsc/types.hpp"

namespace gsc {

// Expected strategic error of `model` on the sample, decomposed as
// epsilon * P(x in flip set) + P(misclassified and outside the flip set).
double ia_lhs_estimate(const ResponseSetting& setting, const LinearModel& model,
                       const Dataset& sample);

struct IaSystemCheck {
  bool aligned = false;
  double slack = 0.0;  // baseline error minus strategic error estimate
  double baseline_error = 0.0;
};

// Whether encouraging strategic behavior beats the best non-strategic
// classifier among the supplied baseline candidates.
IaSystemCheck ia_check_system(const ResponseSetting& setting, const LinearModel& model,
                              const Dataset& sample,
                              const std::vector<LinearModel>& baseline_models);

// Whether system predictions on responded inputs beat the user's own label
// estimate: P(h(x) != y | x outside flip set) <= epsilon.
bool ia_check_users(const ResponseSetting& setting, const LinearModel& model,
                    const Dataset& sample, double epsilon);

// Direction minimizing the raw 0/1 error over a 2D angle grid; used as a
// baseline approximation of the best non-strategic classifier.
LinearModel best_raw_model_2d(const Dataset& sample, int n_angles = 3600);

double raw_error(const LinearModel& model, const Dataset& sample);

enum class BoundSubclass { GSC, GP, SC, ADV, NL };

BoundSubclass bound_subclass_from_string(const std::string& s);
std::string to_string(BoundSubclass c);

// Loss-scale constant of the generalization bound: GSC -> 2r, GP/SC/ADV -> r+2,
// NL -> r - 2 + 4 epsilon.
double bound_rho(BoundSubclass subclass, double r, double epsilon = 0.0);

// Numeric value of the high-probability bound on the expected strategic 0/1
// error. Middle-term constant is 8 for GSC and 4 for the subclasses; the log
// argument is clamped below at e to keep the square root defined.
double bound_value(BoundSubclass subclass, double empirical_loss, double w_norm,
                   double r, double m, double delta, double epsilon = 0.0);

}  // namespace gsc
