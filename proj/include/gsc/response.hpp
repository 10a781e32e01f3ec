#pragma once

#include "gsc/types.hpp"

namespace gsc {

// The label a user in a linear setting is trying to obtain.
// SC -> +1, ADV -> -y, NL/GP -> the stored target.
int target_label(const ResponseSetting& setting, const Example& example);

// Exact best response of a user with target label `target` against a linear
// classifier: move to the cheapest point classified as `target` when the
// movement cost (scaled by the cost weight) is worth the unit utility gain,
// otherwise stay. Users landing on the boundary from the negative side
// overshoot by `eta` so that the realized prediction matches the target under
// the sign(0) = +1 convention.
Vec respond_gp_exact(const LinearModel& model, const Vec& x, int target,
                     double eta = 1e-9, double budget = 2.0);

// Differentiable approximation of respond_gp_exact: the projection step scaled
// by a sigmoid gate that turns on inside the movement band.
Vec respond_gp_smoothed(const LinearModel& model, const Vec& x, int target,
                        double temperature, double budget = 2.0);

// Response against a perturbed classifier theta + z with SC semantics.
Vec respond_noise(const LinearModel& theta, const Vec& x, const Vec& z,
                  double eta = 1e-9, double budget = 2.0);

// Exact minimizer of ||A W x' - Y||^2 + (n/2) ||x' - x||^2 over x'
// (squared-loss proxy user; closed form through an SPD solve).
Vec respond_ppe_squared(const BilinearModel& model, const Vec& x, const History& z);

// Approximate minimizer of (1/n) sum L(x', a_j, y_j; W) + 1/2 ||x' - x||^2 by
// gradient descent from x with a fixed step count and size.
Vec respond_ppe_iterative(const BilinearModel& model, const Vec& x, const History& z,
                          PpeUserLoss user_loss, int steps = 100, double lr = 0.05);

// Dispatch on setting kind for linear settings (SC/NL/GP/ADV/NOISE).
Vec respond(const ResponseSetting& setting, const LinearModel& model, const Example& example);

// Dispatch for the PPE setting: picks the user's proxy-loss response. An empty
// history yields no movement.
Vec respond(const ResponseSetting& setting, const BilinearModel& model, const PpeExample& example);

// Prediction on the responded features, computed analytically so that
// boundary landings resolve to the user's achieved class without relying on
// floating-point cancellation.
int post_response_label(const ResponseSetting& setting, const LinearModel& model,
                        const Example& example);
int post_response_label(const ResponseSetting& setting, const BilinearModel& model,
                        const PpeExample& example);

}  // namespace gsc
