#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace rdrl::eval {

class AhpError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Saaty's random consistency index for n = 3..9.
double random_index(int n);

template <typename Scalar>
struct AhpResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;  // sums to 1
  Scalar lambda_max = 0;
  Scalar consistency_index = 0;
  Scalar consistency_ratio = 0;
  bool inconsistent = false;  // CR > 0.1
  int iterations = 0;
};

/// Principal eigenvector of a positive reciprocal comparison matrix by power iteration.
template <typename Scalar>
AhpResult<Scalar> ahp_weights(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                              Scalar tolerance = Scalar(1e-10), int max_iterations = 10000) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw AhpError("comparison matrix must be square");
  if (n < 3 || n > 9) throw AhpError("comparison matrix size must be between 3 and 9");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(a(i, j) > Scalar(0)) || !std::isfinite(static_cast<double>(a(i, j))))
        throw AhpError("comparison matrix entries must be positive and finite");
      if (std::abs(a(i, j) * a(j, i) - Scalar(1)) > Scalar(1e-9))
        throw AhpError("comparison matrix is not reciprocal at (" + std::to_string(i) + ", " +
                       std::to_string(j) + ")");
    }

  AhpResult<Scalar> out;
  Vector w = Vector::Constant(n, Scalar(1) / Scalar(n));
  bool converged = false;
  for (int k = 1; k <= max_iterations; ++k) {
    Vector next = a * w;
    next /= next.sum();
    const Scalar change = (next - w).cwiseAbs().sum();
    w = next;
    out.iterations = k;
    if (change < tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) throw std::runtime_error("AHP power iteration did not converge");
  out.weights = w;
  out.lambda_max = (a * w).cwiseQuotient(w).mean();
  out.consistency_index = (out.lambda_max - Scalar(n)) / Scalar(n - 1);
  out.consistency_ratio = out.consistency_index / Scalar(random_index(static_cast<int>(n)));
  out.inconsistent = out.consistency_ratio > Scalar(0.1);
  return out;
}

/// a_ij = w_i / w_j: the perfectly consistent matrix for a weight vector.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> consistent_matrix(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& w) {
  return w * w.cwiseInverse().transpose();
}

}  // namespace rdrl::eval
