#include "gsc/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "gsc/errors.hpp"

namespace gsc {

double dot(const Vec& u, const Vec& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("dot: length mismatch (" + std::to_string(u.size()) +
                                " vs " + std::to_string(v.size()) + ")");
  }
  return u.dot(v);
}

Vec solve_spd(const Mat& M, const Vec& b) {
  if (M.rows() != M.cols()) throw std::invalid_argument("solve_spd: matrix not square");
  if (M.rows() != b.size()) throw std::invalid_argument("solve_spd: size mismatch");
  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NumericError("solve_spd: factorization failed, matrix is not positive definite");
  }
  return llt.solve(b);
}

int sign_pred(double s) {
  if (!std::isfinite(s)) throw std::invalid_argument("sign_pred: non-finite score");
  return s >= 0.0 ? +1 : -1;
}

}  // namespace gsc
