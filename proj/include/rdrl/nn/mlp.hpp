#pragma once

#include <Eigen/Core>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdrl::nn {

enum class Activation : std::uint8_t { kIdentity = 0, kTanh = 1 };

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fully connected network. Batches are column-major: one sample per column.
template <typename Scalar>
class BasicMlp {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Layer {
    Matrix weight;  // fan_out x fan_in
    Vector bias;
    Activation activation = Activation::kIdentity;
  };

  /// Per-layer outputs of the last forward pass; activations[0] is the input.
  struct Cache {
    std::vector<Matrix> activations;
  };

  BasicMlp() = default;

  /// Zero-initialized network.
  BasicMlp(const std::vector<int>& sizes, Activation hidden, Activation output) {
    if (sizes.size() < 2) throw ShapeError("an MLP needs at least input and output sizes");
    for (int s : sizes)
      if (s <= 0) throw ShapeError("layer sizes must be positive");
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      Layer layer;
      layer.weight = Matrix::Zero(sizes[l + 1], sizes[l]);
      layer.bias = Vector::Zero(sizes[l + 1]);
      layer.activation = (l + 2 == sizes.size()) ? output : hidden;
      layers_.push_back(std::move(layer));
    }
  }

  /// Orthogonal initialization: hidden layers with gain sqrt(2), the last layer
  /// with `output_gain`; zero biases.
  template <typename Urbg>
  static BasicMlp orthogonal(const std::vector<int>& sizes, Activation hidden, Activation output,
                             Urbg& rng, double output_gain = 1.0) {
    BasicMlp net(sizes, hidden, output);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t l = 0; l < net.layers_.size(); ++l) {
      auto& w = net.layers_[l].weight;
      const Eigen::Index rows = w.rows(), cols = w.cols();
      const Eigen::Index big = std::max(rows, cols), small = std::min(rows, cols);
      Eigen::MatrixXd a(big, small);
      for (Eigen::Index j = 0; j < small; ++j)
        for (Eigen::Index i = 0; i < big; ++i) a(i, j) = normal(rng);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
      // sign fix makes the draw uniform over orthogonal matrices
      const Eigen::VectorXd d = qr.matrixQR().diagonal();
      for (Eigen::Index j = 0; j < small; ++j)
        if (d(j) < 0) q.col(j) *= -1.0;
      const double gain = (l + 1 == net.layers_.size()) ? output_gain : std::sqrt(2.0);
      Eigen::MatrixXd oriented = rows >= cols ? q : Eigen::MatrixXd(q.transpose());
      w = (gain * oriented).template cast<Scalar>();
    }
    return net;
  }

  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& layers() { return layers_; }
  int input_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols()); }
  int output_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows()); }

  std::vector<int> sizes() const {
    std::vector<int> out;
    if (layers_.empty()) return out;
    out.push_back(input_size());
    for (const auto& l : layers_) out.push_back(static_cast<int>(l.weight.rows()));
    return out;
  }

  Eigen::Index parameter_count() const {
    Eigen::Index n = 0;
    for (const auto& l : layers_) n += l.weight.size() + l.bias.size();
    return n;
  }

  Matrix forward(const Matrix& input, Cache& cache) const {
    check_input(input.rows());
    cache.activations.clear();
    cache.activations.reserve(layers_.size() + 1);
    cache.activations.push_back(input);
    for (const auto& l : layers_) {
      Matrix z = l.weight * cache.activations.back();
      z.colwise() += l.bias;
      apply(l.activation, z);
      cache.activations.push_back(std::move(z));
    }
    return cache.activations.back();
  }

  Matrix predict(const Matrix& input) const {
    check_input(input.rows());
    Matrix x = input;
    for (const auto& l : layers_) {
      Matrix z = l.weight * x;
      z.colwise() += l.bias;
      apply(l.activation, z);
      x = std::move(z);
    }
    return x;
  }

  Vector predict(const Vector& input) const { return predict(Matrix(input)).col(0); }

  /// Gradient of sum(output_grad .* output) with respect to the flattened
  /// parameters, summed over the batch of the cached forward pass.
  Vector backward(const Cache& cache, const Matrix& output_grad, Matrix* input_grad = nullptr) const {
    if (cache.activations.size() != layers_.size() + 1)
      throw std::logic_error("backward() called before forward()");
    const Matrix& out = cache.activations.back();
    if (output_grad.rows() != out.rows() || output_grad.cols() != out.cols())
      throw ShapeError("output gradient shape does not match the cached forward pass");

    Vector grad(parameter_count());
    Eigen::Index offset = grad.size();
    Matrix delta = output_grad;
    for (std::size_t k = layers_.size(); k-- > 0;) {
      const auto& l = layers_[k];
      scale_by_derivative(l.activation, cache.activations[k + 1], delta);
      const Matrix& x = cache.activations[k];
      offset -= l.bias.size();
      grad.segment(offset, l.bias.size()) = delta.rowwise().sum();
      offset -= l.weight.size();
      Matrix gw = delta * x.transpose();
      grad.segment(offset, l.weight.size()) = Eigen::Map<const Vector>(gw.data(), gw.size());
      if (k > 0 || input_grad) delta = l.weight.transpose() * delta;
    }
    if (input_grad) *input_grad = delta;
    return grad;
  }

  /// Forward-mode derivative of the cached outputs along parameter direction `tangent`.
  Matrix jvp(const Cache& cache, const Vector& tangent) const {
    if (cache.activations.size() != layers_.size() + 1)
      throw std::logic_error("jvp() called before forward()");
    if (tangent.size() != parameter_count()) throw ShapeError("tangent size mismatch");
    const Eigen::Index batch = cache.activations.front().cols();
    Matrix dx = Matrix::Zero(cache.activations.front().rows(), batch);
    Eigen::Index offset = 0;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
      const auto& l = layers_[k];
      Eigen::Map<const Matrix> dw(tangent.data() + offset, l.weight.rows(), l.weight.cols());
      offset += l.weight.size();
      Eigen::Map<const Vector> db(tangent.data() + offset, l.bias.size());
      offset += l.bias.size();
      Matrix dz = l.weight * dx + dw * cache.activations[k];
      dz.colwise() += db;
      scale_by_derivative(l.activation, cache.activations[k + 1], dz);
      dx = std::move(dz);
    }
    return dx;
  }

  /// Layer order; within a layer the column-major weight, then the bias.
  Vector parameters() const {
    Vector out(parameter_count());
    Eigen::Index offset = 0;
    for (const auto& l : layers_) {
      out.segment(offset, l.weight.size()) = Eigen::Map<const Vector>(l.weight.data(), l.weight.size());
      offset += l.weight.size();
      out.segment(offset, l.bias.size()) = l.bias;
      offset += l.bias.size();
    }
    return out;
  }

  void set_parameters(const Vector& flat) {
    if (flat.size() != parameter_count()) throw ShapeError("parameter vector size mismatch");
    Eigen::Index offset = 0;
    for (auto& l : layers_) {
      l.weight = Eigen::Map<const Matrix>(flat.data() + offset, l.weight.rows(), l.weight.cols());
      offset += l.weight.size();
      l.bias = flat.segment(offset, l.bias.size());
      offset += l.bias.size();
    }
  }

  template <typename Other>
  BasicMlp<Other> cast() const {
    BasicMlp<Other> out;
    for (const auto& l : layers_) {
      typename BasicMlp<Other>::Layer o;
      o.weight = l.weight.template cast<Other>();
      o.bias = l.bias.template cast<Other>();
      o.activation = l.activation;
      out.layers().push_back(std::move(o));
    }
    return out;
  }

 private:
  void check_input(Eigen::Index rows) const {
    if (layers_.empty()) throw ShapeError("empty network");
    if (rows != input_size())
      throw ShapeError("input has " + std::to_string(rows) + " rows, network expects " +
                       std::to_string(input_size()));
  }

  static void apply(Activation a, Matrix& z) {
    if (a == Activation::kTanh) z = z.array().tanh().matrix();
  }

  // g *= f'(z), written in terms of the layer output y = f(z)
  static void scale_by_derivative(Activation a, const Matrix& y, Matrix& g) {
    if (a == Activation::kTanh) g.array() *= Scalar(1) - y.array().square();
  }

  std::vector<Layer> layers_;
};

using Mlp = BasicMlp<double>;

}  // namespace rdrl::nn
