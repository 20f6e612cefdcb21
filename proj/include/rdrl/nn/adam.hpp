#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace rdrl::nn {

template <typename Scalar>
struct AdamMoments {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> m;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v;
  long step = 0;
};

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam update, in place. Moments are sized lazily.
template <typename Scalar>
void adam_step(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& params,
               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& grads, AdamMoments<Scalar>& moments,
               const AdamConfig& cfg) {
  if (params.size() != grads.size()) throw std::invalid_argument("adam: shape mismatch");
  if (!grads.allFinite()) throw std::domain_error("adam: non-finite gradient");
  if (moments.m.size() == 0) {
    moments.m.setZero(params.size());
    moments.v.setZero(params.size());
    moments.step = 0;
  }
  if (moments.m.size() != params.size()) throw std::invalid_argument("adam: moment size mismatch");
  ++moments.step;
  const Scalar b1 = Scalar(cfg.beta1), b2 = Scalar(cfg.beta2);
  moments.m = b1 * moments.m + (Scalar(1) - b1) * grads;
  moments.v = b2 * moments.v + (Scalar(1) - b2) * grads.cwiseAbs2();
  const Scalar c1 = Scalar(1) - std::pow(b1, Scalar(moments.step));
  const Scalar c2 = Scalar(1) - std::pow(b2, Scalar(moments.step));
  params.array() -= Scalar(cfg.lr) * (moments.m.array() / c1) /
                    ((moments.v.array() / c2).sqrt() + Scalar(cfg.eps));
}

/// Owns the moments for one parameter vector.
template <typename Scalar>
class BasicAdam {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  BasicAdam() = default;
  explicit BasicAdam(AdamConfig cfg) : cfg_(cfg) {}
  void step(Vector& params, const Vector& grads) { adam_step(params, grads, moments_, cfg_); }
  const AdamMoments<Scalar>& moments() const { return moments_; }
  AdamConfig& config() { return cfg_; }

 private:
  AdamConfig cfg_;
  AdamMoments<Scalar> moments_;
};

using Adam = BasicAdam<double>;

/// Rescales `g` so its Euclidean norm is at most `max_norm` (no-op for max_norm <= 0).
template <typename Derived>
void clip_norm(Eigen::MatrixBase<Derived>& g, double max_norm) {
  if (max_norm <= 0) return;
  const double n = static_cast<double>(g.norm());
  if (n > max_norm) g *= typename Derived::Scalar(max_norm / n);
}

}  // namespace rdrl::nn
