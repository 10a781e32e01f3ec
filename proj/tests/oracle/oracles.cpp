#include "oracle/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "gsc/margins.hpp"

namespace gsc::oracle {

double response_objective(const std::function<double(const Vec&)>& utility, const Vec& x,
                          const Vec& moved, double cost_weight, bool squared_cost) {
  double c = (x - moved).norm();
  if (squared_cost) c *= c;
  return utility(moved) - cost_weight * c;
}

GridResult grid_argmax_response(const std::function<double(const Vec&)>& utility,
                                const Vec& x, double cost_weight, double bound,
                                double step, bool squared_cost) {
  const Eigen::Index d = x.size();
  if (d > 3) throw std::invalid_argument("grid_argmax_response: d <= 3 only");
  const auto steps = static_cast<Eigen::Index>(std::floor(2.0 * bound / step)) + 1;

  GridResult best{x, response_objective(utility, x, x, cost_weight, squared_cost)};
  double best_cost = 0.0;

  Vec g(d);
  std::vector<Eigen::Index> idx(d, 0);
  bool done = false;
  while (!done) {
    for (Eigen::Index k = 0; k < d; ++k) g[k] = -bound + idx[k] * step;
    double obj = response_objective(utility, x, g, cost_weight, squared_cost);
    double cost = (x - g).norm();
    bool better = obj > best.objective + 1e-12;
    if (!better && std::abs(obj - best.objective) <= 1e-12) {
      if (cost < best_cost - 1e-12) {
        better = true;
      } else if (std::abs(cost - best_cost) <= 1e-12) {
        for (Eigen::Index k = 0; k < d; ++k) {
          if (g[k] != best.argmax[k]) {
            better = g[k] < best.argmax[k];
            break;
          }
        }
      }
    }
    if (better) {
      best = {g, obj};
      best_cost = cost;
    }
    Eigen::Index k = 0;
    for (; k < d; ++k) {
      if (++idx[k] < steps) break;
      idx[k] = 0;
    }
    done = (k == d);
  }
  return best;
}

AngleGridResult angle_grid_best_smargin(const Dataset& dataset, int n_angles) {
  if (dataset.empty() || dataset.front().x.size() != 2) {
    throw std::invalid_argument("angle_grid_best_smargin: needs a non-empty 2D dataset");
  }
  AngleGridResult best;
  best.margin = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_angles; ++i) {
    double theta = 2.0 * M_PI * i / n_angles;
    LinearModel cand{Vec(2)};
    cand.w << std::cos(theta), std::sin(theta);
    double margin = strategic_margin_nl(cand, dataset);
    if (margin > best.margin) {
      best.margin = margin;
      best.model = cand;
    }
  }
  return best;
}

Vec finite_diff_grad(const std::function<double(const Vec&)>& f, const Vec& point,
                     double h) {
  Vec grad(point.size());
  Vec p = point;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    p[i] = point[i] + h;
    double fp = f(p);
    p[i] = point[i] - h;
    double fm = f(p);
    p[i] = point[i];
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw std::invalid_argument("finite_diff_grad: NaN in evaluations");
    }
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

Mat finite_diff_grad(const std::function<double(const Mat&)>& f, const Mat& point,
                     double h) {
  Mat grad(point.rows(), point.cols());
  Mat p = point;
  for (Eigen::Index j = 0; j < point.cols(); ++j) {
    for (Eigen::Index i = 0; i < point.rows(); ++i) {
      p(i, j) = point(i, j) + h;
      double fp = f(p);
      p(i, j) = point(i, j) - h;
      double fm = f(p);
      p(i, j) = point(i, j);
      if (!std::isfinite(fp) || !std::isfinite(fm)) {
        throw std::invalid_argument("finite_diff_grad: NaN in evaluations");
      }
      grad(i, j) = (fp - fm) / (2.0 * h);
    }
  }
  return grad;
}

bool near_kink(const std::function<double(const Vec&)>& f, const Vec& point, double h,
               double factor, double tol) {
  const double f0 = f(point);
  Vec p = point;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    p[i] = point[i] + h;
    double forward = (f(p) - f0) / h;
    p[i] = point[i] - h;
    double backward = (f0 - f(p)) / h;
    p[i] = point[i];
    double scale = std::max({std::abs(forward), std::abs(backward), 1.0});
    if (std::abs(forward - backward) > factor * tol * scale) return true;
  }
  return false;
}

}  // namespace gsc::oracle
