#include "gsc/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "gsc/errors.hpp"

namespace gsc {

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

}  // namespace

int strategic_zero_one(const ResponseSetting& setting, const LinearModel& model,
                       const Example& example) {
  return post_response_label(setting, model, example) != example.y ? 1 : 0;
}

int strategic_zero_one(const ResponseSetting& setting, const BilinearModel& model,
                       const PpeExample& example) {
  return post_response_label(setting, model, example) != example.y ? 1 : 0;
}

LossGrad hinge_standard(const LinearModel& model, const Vec& x, int y) {
  double margin = y * dot(model.w, x);
  if (margin >= 1.0) return {0.0, Vec::Zero(x.size())};
  return {1.0 - margin, -static_cast<double>(y) * x};
}

LossGrad hinge_naive(const ResponseSetting& setting, const LinearModel& model,
                     const Example& example, double temperature) {
  const int z = target_label(setting, example);
  const int y = example.y;
  const double budget = setting.cost.budget();
  const double wn = model.norm_checked();
  const double score = dot(model.w, example.x);
  const double s = z * score / wn;
  const double cond = -s * (s + budget);
  const double gate = sigmoid(temperature * cond);

  // w·Delta = score (1 - gate), since the smoothed step removes the component
  // of x along w scaled by the gate.
  const double f = score * (1.0 - gate);
  const double margin = y * f;
  if (margin >= 1.0) return {0.0, Vec::Zero(example.x.size())};

  // d(cond)/dw = -(2s + budget) ds/dw, ds/dw = z (x/||w|| - score w/||w||^3)
  Vec ds_dw = (static_cast<double>(z) / wn) * (example.x - (score / (wn * wn)) * model.w);
  Vec dgate_dw = gate * (1.0 - gate) * temperature * (-(2.0 * s + budget)) * ds_dw;
  Vec df_dw = (1.0 - gate) * example.x - score * dgate_dw;
  return {1.0 - margin, -static_cast<double>(y) * df_dw};
}

LossGrad s_hinge_gp(const LinearModel& model, const Vec& x, int z, int y) {
  double wn = model.w.norm();
  double arg = y * dot(model.w, x) + 2.0 * z * y * wn;
  if (arg >= 1.0) return {0.0, Vec::Zero(x.size())};
  Vec grad = -static_cast<double>(y) * x;
  if (wn > 0.0) grad -= (2.0 * z * y / wn) * model.w;  // subgradient 0 at w = 0
  return {1.0 - arg, std::move(grad)};
}

double s_hinge_alternate_nl(const LinearModel& model, const Vec& x, int target, int y,
                            double eta) {
  Vec moved = respond_gp_exact(model, x, target, eta);
  double cost_incurred = (x - moved).norm();
  double wn = model.norm_checked();
  double arg = y * dot(model.w, moved) + (2.0 - cost_incurred) * y * target * wn;
  return std::max(0.0, 1.0 - arg);
}

double gs_hinge_generic(const ResponseSetting& setting, const LinearModel& model,
                        const Example& example,
                        const std::function<double(const Vec&, const SideInfo&)>& distance_fn) {
  double d = distance_fn(example.x, example.z);
  if (!std::isfinite(d)) {
    throw NumericError("gs_hinge_generic: strategic distance is infinite");
  }
  int sgn = post_response_label(setting, model, example);
  double arg = example.y * sgn * d * model.norm_checked();
  return std::max(0.0, 1.0 - arg);
}

LossGradW gs_hinge_ppe(const BilinearModel& model, const Vec& x, const History& z,
                       const Vec& item, int y, double lambda_d, double temperature) {
  z.validate();
  const Eigen::Index l = model.W.rows();
  const Eigen::Index d = model.W.cols();
  if (z.items.cols() != l || x.size() != d || item.size() != l) {
    throw std::invalid_argument("gs_hinge_ppe: dimension mismatch");
  }
  const double n = static_cast<double>(z.size());
  const Mat B = z.items * model.W;  // n x d
  const Mat M = 2.0 * B.transpose() * B + n * Mat::Identity(d, d);
  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NumericError("gs_hinge_ppe: response system not positive definite");
  }

  // Response of x: t = M^{-1} (n x + 2 B^T Y)  (the linear map alpha x + beta).
  const Vec t = llt.solve(n * x + 2.0 * B.transpose() * z.labels);
  const Vec u = model.W.transpose() * item;  // personalized classifier a^T W
  const Vec m = llt.solve(u);
  const Vec p = n * m;        // gradient of x' -> a^T W (alpha x' + beta)
  const Vec k = llt.solve(p); // second resolvent application, for d||p||^2

  const double g = u.dot(t);  // post-response score a^T W Delta(x)
  const double p2 = p.squaredNorm();
  const double pn = std::sqrt(p2);
  const double un = u.norm();

  // Penalized projection of x onto {x' : a^T W (alpha x' + beta) = 0} has the
  // closed form x - g p / (lambda_d + ||p||^2); its distance from x:
  const double dist = std::abs(g) * pn / (lambda_d + p2);
  const double smooth_sign = 2.0 * sigmoid(temperature * g) - 1.0;
  const double psi = y * smooth_sign * dist * un;

  if (1.0 - psi <= 0.0) return {0.0, Mat::Zero(l, d)};

  // dg/dW = a t^T + 2 A^T (Y - B t) m^T - 2 A^T (B m) t^T
  const Mat dg = item * t.transpose() +
                 2.0 * z.items.transpose() * ((z.labels - B * t) * m.transpose()) -
                 2.0 * z.items.transpose() * ((B * m) * t.transpose());

  // p^T dp/dW = n [ a k^T - 2 A^T (B m) k^T - 2 A^T (B k) m^T ]
  const Mat pdp = n * (item * k.transpose() -
                       2.0 * z.items.transpose() * ((B * m) * k.transpose()) -
                       2.0 * z.items.transpose() * ((B * k) * m.transpose()));

  const double denom = lambda_d + p2;
  Mat ddist = Mat::Zero(l, d);
  if (g != 0.0) ddist += ((g > 0 ? 1.0 : -1.0) * pn / denom) * dg;
  if (pn > 0.0) ddist += (std::abs(g) * (lambda_d - p2) / (pn * denom * denom)) * pdp;

  const double dsign = 2.0 * temperature * sigmoid(temperature * g) *
                       (1.0 - sigmoid(temperature * g));

  Mat dpsi = y * (dsign * dist * un * dg + smooth_sign * un * ddist);
  if (un > 0.0) dpsi += y * smooth_sign * dist / un * (item * u.transpose());

  return {1.0 - psi, -dpsi};
}

}  // namespace gsc
