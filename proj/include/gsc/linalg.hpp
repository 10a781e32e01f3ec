#pragma once

#include <Eigen/Dense>

namespace gsc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Dot product with an explicit length check.
double dot(const Vec& u, const Vec& v);

// Solves M v = b for symmetric positive definite M by Cholesky factorization.
// Throws NumericError if a non-positive pivot is encountered.
Vec solve_spd(const Mat& M, const Vec& b);

// Classification convention: sign(0) = +1. Throws on non-finite input.
int sign_pred(double s);

}  // namespace gsc
