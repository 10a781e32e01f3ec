#pragma once

#include <functional>

#include "gsc/response.hpp"
#include "gsc/types.hpp"

namespace gsc {

struct LossGrad {
  double value = 0.0;
  Vec grad;
};

struct LossGradW {
  double value = 0.0;
  Mat grad;
};

// 1 iff the post-response prediction differs from the true label.
int strategic_zero_one(const ResponseSetting& setting, const LinearModel& model,
                       const Example& example);
int strategic_zero_one(const ResponseSetting& setting, const BilinearModel& model,
                       const PpeExample& example);

// max{0, 1 - y w·x}; subgradient 0 at the kink.
LossGrad hinge_standard(const LinearModel& model, const Vec& x, int y);

// Standard hinge on the smoothed response; the gradient flows through it.
LossGrad hinge_naive(const ResponseSetting& setting, const LinearModel& model,
                     const Example& example, double temperature);

// max{0, 1 - y w·x - 2 z y ||w||}: the strategic hinge for GP-family settings.
LossGrad s_hinge_gp(const LinearModel& model, const Vec& x, int z, int y);

// Equivalent form written against the exact response; accounts for both the
// actual and the maximal modification cost. Used as an identity check.
double s_hinge_alternate_nl(const LinearModel& model, const Vec& x, int target, int y,
                            double eta = 1e-9);

// Generalized strategic hinge: correctness on responded inputs combined with a
// strategic distance supplied by the caller. Throws NumericError when the
// distance function signals an infinite distance.
double gs_hinge_generic(const ResponseSetting& setting, const LinearModel& model,
                        const Example& example,
                        const std::function<double(const Vec&, const SideInfo&)>& distance_fn);

// Strategic hinge for PPE with a squared-loss system-side response model.
// The response is the linear map alpha x + beta; sign is smoothed by a scaled
// sigmoid; the strategic distance comes from a penalized projection with
// weight lambda_d. Gradient in W is analytic.
LossGradW gs_hinge_ppe(const BilinearModel& model, const Vec& x, const History& z,
                       const Vec& item, int y, double lambda_d = 0.01,
                       double temperature = 1.0);

}  // namespace gsc
