#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <random>

#include "rdrl/nn/mlp.hpp"

namespace rdrl::nn {

/// Log density of a diagonal Gaussian, one value per column of `x`.
template <typename Scalar>
Eigen::Matrix<Scalar, 1, Eigen::Dynamic> gaussian_log_prob(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& x,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& mean,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& log_std) {
  const Scalar half_log_2pi = Scalar(0.5) * std::log(Scalar(2) * std::numbers::pi_v<Scalar>);
  const auto inv_std = (-log_std.array()).exp().matrix();
  const auto z = (x - mean).array().colwise() * inv_std.array();
  const Scalar norm = log_std.sum() + Scalar(log_std.size()) * half_log_2pi;
  return (Scalar(-0.5) * z.square().colwise().sum()).matrix().array() - norm;
}

template <typename Scalar>
Scalar gaussian_log_prob(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                         const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& mean,
                         const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& log_std) {
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return gaussian_log_prob<Scalar>(M(x), M(mean), log_std)(0);
}

/// Per-column KL(old || new) between diagonal Gaussians.
template <typename Scalar>
Eigen::Matrix<Scalar, 1, Eigen::Dynamic> gaussian_kl(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& mean_old,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& log_std_old,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& mean_new,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& log_std_new) {
  const auto var_old = (Scalar(2) * log_std_old.array()).exp();
  const auto inv_var_new = (Scalar(-2) * log_std_new.array()).exp();
  const Scalar const_part =
      (log_std_new - log_std_old).sum() + Scalar(0.5) * ((var_old * inv_var_new).sum() - Scalar(log_std_old.size()));
  const auto quad = ((mean_old - mean_new).array().square().colwise() * inv_var_new).colwise().sum();
  return (Scalar(0.5) * quad + const_part).matrix();
}

template <typename Scalar>
Scalar gaussian_entropy(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& log_std) {
  const Scalar c = Scalar(0.5) * (Scalar(1) + std::log(Scalar(2) * std::numbers::pi_v<Scalar>));
  return log_std.sum() + Scalar(log_std.size()) * c;
}

/// Sum over action dimensions of log(1 - tanh(u)^2), per column. Subtracting it
/// from the Gaussian log density gives the density of tanh(u).
template <typename Scalar>
Eigen::Matrix<Scalar, 1, Eigen::Dynamic> tanh_log_det(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& u) {
  const Scalar log2 = std::log(Scalar(2));
  auto softplus = [](Scalar x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); };
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> t = u.unaryExpr(
      [&](Scalar x) { return Scalar(2) * (log2 - x - softplus(Scalar(-2) * x)); });
  return t.colwise().sum();
}

/// Stochastic policy: MLP mean, state-independent log standard deviation.
template <typename Scalar>
class BasicGaussianPolicy {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Row = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
  using Net = BasicMlp<Scalar>;

  BasicGaussianPolicy() = default;
  BasicGaussianPolicy(Net mean_net, Scalar initial_log_std)
      : mean_net_(std::move(mean_net)),
        log_std_(Vector::Constant(mean_net_.output_size(), initial_log_std)) {}

  const Net& mean_net() const { return mean_net_; }
  Net& mean_net() { return mean_net_; }
  const Vector& log_std() const { return log_std_; }
  Vector& log_std() { return log_std_; }
  int action_size() const { return mean_net_.output_size(); }

  Eigen::Index parameter_count() const { return mean_net_.parameter_count() + log_std_.size(); }

  /// Mean-network parameters followed by log_std.
  Vector parameters() const {
    Vector out(parameter_count());
    out << mean_net_.parameters(), log_std_;
    return out;
  }

  void set_parameters(const Vector& flat) {
    if (flat.size() != parameter_count()) throw ShapeError("policy parameter size mismatch");
    const Eigen::Index n = mean_net_.parameter_count();
    mean_net_.set_parameters(flat.head(n));
    log_std_ = flat.tail(log_std_.size());
  }

  Matrix mean(const Matrix& obs) const { return mean_net_.predict(obs); }

  Row log_prob(const Matrix& obs, const Matrix& u) const {
    return gaussian_log_prob<Scalar>(u, mean(obs), log_std_);
  }

  /// Gradient of sum_b weights_b * log pi(u_b | obs_b) over all parameters.
  /// `cache` must hold mean_net().forward(obs).
  Vector log_prob_gradient(const typename Net::Cache& cache, const Matrix& u, const Row& weights) const {
    const Matrix& mu = cache.activations.back();
    const auto inv_var = (Scalar(-2) * log_std_.array()).exp();
    Matrix diff = u - mu;
    Matrix d_mean = (diff.array().colwise() * inv_var).matrix();
    d_mean.array().rowwise() *= weights.array();
    Vector grad(parameter_count());
    grad.head(mean_net_.parameter_count()) = mean_net_.backward(cache, d_mean);
    Matrix z2 = diff.array().square().colwise() * inv_var;
    grad.tail(log_std_.size()) =
        ((z2.array() - Scalar(1)).rowwise() * weights.array()).rowwise().sum().matrix();
    return grad;
  }

  template <typename Urbg>
  Vector sample(const Vector& obs, Urbg& rng) const {
    Vector mu = mean_net_.predict(obs);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < mu.size(); ++i)
      mu(i) += std::exp(log_std_(i)) * Scalar(normal(rng));
    return mu;
  }

  Scalar entropy() const { return gaussian_entropy<Scalar>(log_std_); }

 private:
  Net mean_net_;
  Vector log_std_;
};

using GaussianPolicy = BasicGaussianPolicy<double>;

}  // namespace rdrl::nn
