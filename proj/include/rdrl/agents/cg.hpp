#pragma once

#include <Eigen/Core>

#include <cmath>

namespace rdrl::agents {

template <typename Scalar>
struct CgResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  int iterations = 0;
  bool breakdown = false;  // non-positive curvature met
  Scalar residual_norm = 0;
};

/// Solves A x = b for symmetric positive definite A given only `apply(v) = A v`.
template <typename Scalar, typename Apply>
CgResult<Scalar> conjugate_gradient(Apply&& apply, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                                    int max_iterations, Scalar tolerance = Scalar(1e-12)) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  CgResult<Scalar> out;
  out.x = Vector::Zero(b.size());
  Vector r = b;
  Vector p = r;
  Scalar rr = r.squaredNorm();
  for (int k = 0; k < max_iterations && std::sqrt(rr) > tolerance; ++k) {
    const Vector ap = apply(p);
    const Scalar curvature = p.dot(ap);
    if (!(curvature > Scalar(0))) {
      out.breakdown = true;
      break;
    }
    const Scalar alpha = rr / curvature;
    out.x += alpha * p;
    r -= alpha * ap;
    const Scalar rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    out.iterations = k + 1;
  }
  out.residual_norm = std::sqrt(rr);
  return out;
}

}  // namespace rdrl::agents
