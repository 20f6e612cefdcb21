#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rdrl/nn/adam.hpp"
#include "rdrl/nn/gaussian.hpp"
#include "rdrl/nn/mlp.hpp"

using namespace rdrl::nn;

TEST(Mlp, ZeroNetworkGivesZeroOutput) {
  Mlp net({3, 4, 2}, Activation::kTanh, Activation::kIdentity);
  EXPECT_EQ(net.parameter_count(), 3 * 4 + 4 + 4 * 2 + 2);
  const Eigen::VectorXd y = net.predict(Eigen::VectorXd(Eigen::VectorXd::Ones(3)));
  EXPECT_EQ(y, Eigen::VectorXd::Zero(2));
}

TEST(Mlp, HandComputedOneTwoOne) {
  Mlp net({1, 2, 1}, Activation::kTanh, Activation::kIdentity);
  auto& l = net.layers();
  l[0].weight << 0.5, -0.25;
  l[0].bias << 0.1, 0.2;
  l[1].weight << 2.0, 3.0;
  l[1].bias << -0.5;
  const double x = 0.8;
  const double expected = 2.0 * std::tanh(0.5 * x + 0.1) + 3.0 * std::tanh(-0.25 * x + 0.2) - 0.5;
  EXPECT_NEAR(net.predict(Eigen::VectorXd(Eigen::VectorXd::Constant(1, x)))(0), expected, 1e-15);
}

TEST(Mlp, TanhSaturationStaysInRange) {
  Mlp net({2, 3}, Activation::kTanh, Activation::kTanh);
  for (auto& l : net.layers()) l.weight.setOnes();
  const Eigen::VectorXd y = net.predict(Eigen::VectorXd(Eigen::VectorXd::Constant(2, 1e6)));
  EXPECT_TRUE((y.array() <= 1.0).all());
  EXPECT_TRUE((y.array() > -1.0).all());
  EXPECT_TRUE(y.allFinite());
}

TEST(Mlp, ShapeErrors) {
  Mlp net({3, 4, 2}, Activation::kTanh, Activation::kIdentity);
  EXPECT_THROW(net.predict(Eigen::VectorXd(Eigen::VectorXd::Ones(4))), ShapeError);
  EXPECT_THROW(Mlp({3}, Activation::kTanh, Activation::kIdentity), ShapeError);
  EXPECT_THROW(Mlp({3, 0, 1}, Activation::kTanh, Activation::kIdentity), ShapeError);
  Mlp::Cache cache;
  EXPECT_THROW(net.backward(cache, Eigen::MatrixXd::Ones(2, 1)), std::logic_error);
  net.forward(Eigen::MatrixXd::Ones(3, 2), cache);
  EXPECT_THROW(net.backward(cache, Eigen::MatrixXd::Ones(2, 1)), ShapeError);
  EXPECT_THROW(net.set_parameters(Eigen::VectorXd::Zero(3)), ShapeError);
}

TEST(Mlp, ZeroOutputGradientGivesZeroGradient) {
  std::mt19937_64 rng(1);
  auto net = Mlp::orthogonal({5, 8, 3}, Activation::kTanh, Activation::kIdentity, rng);
  Mlp::Cache cache;
  net.forward(Eigen::MatrixXd::Random(5, 4), cache);
  EXPECT_EQ(net.backward(cache, Eigen::MatrixXd::Zero(3, 4)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Mlp, ParameterRoundTrip) {
  std::mt19937_64 rng(2);
  auto net = Mlp::orthogonal({4, 6, 2}, Activation::kTanh, Activation::kIdentity, rng);
  const Eigen::VectorXd p = net.parameters();
  Mlp copy({4, 6, 2}, Activation::kTanh, Activation::kIdentity);
  copy.set_parameters(p);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 5);
  EXPECT_EQ(copy.predict(x), net.predict(x));
  EXPECT_EQ(net.parameters()(0), net.layers()[0].weight(0, 0));
  EXPECT_EQ(net.parameters()(1), net.layers()[0].weight(1, 0));
  EXPECT_EQ(net.parameters()(24), net.layers()[0].bias(0));
}

TEST(Mlp, OrthogonalInitIsOrthogonal) {
  std::mt19937_64 rng(3);
  auto net = Mlp::orthogonal({7, 64, 64, 2}, Activation::kTanh, Activation::kIdentity, rng, 0.01);
  const auto& w0 = net.layers()[0].weight;  // 64 x 7, orthonormal columns times sqrt(2)
  EXPECT_NEAR((w0.transpose() * w0 - 2.0 * Eigen::MatrixXd::Identity(7, 7)).norm(), 0.0, 1e-10);
  const auto& w2 = net.layers()[2].weight;  // 2 x 64, orthonormal rows times 0.01
  EXPECT_NEAR((w2 * w2.transpose() - 1e-4 * Eigen::MatrixXd::Identity(2, 2)).norm(), 0.0, 1e-12);
  std::mt19937_64 again(3);
  EXPECT_EQ(Mlp::orthogonal({7, 64, 64, 2}, Activation::kTanh, Activation::kIdentity, again, 0.01)
                .parameters(),
            net.parameters());
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  const auto r = oracles::mlp_gradient_check(5, 11);
  EXPECT_LT(r.max_rel_error, 1e-5) << r.checked << " coordinates";
}

TEST(Mlp, JvpMatchesDirectionalDerivative) {
  std::mt19937_64 rng(4);
  auto net = Mlp::orthogonal({5, 16, 3}, Activation::kTanh, Activation::kTanh, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 3);
  Eigen::VectorXd v = Eigen::VectorXd::Random(net.parameter_count());
  Mlp::Cache cache;
  net.forward(x, cache);
  const Eigen::MatrixXd jv = net.jvp(cache, v);
  const double h = 1e-6;
  auto a = net, b = net;
  a.set_parameters(net.parameters() + h * v);
  b.set_parameters(net.parameters() - h * v);
  const Eigen::MatrixXd fd = (a.predict(x) - b.predict(x)) / (2 * h);
  EXPECT_LT((jv - fd).cwiseAbs().maxCoeff(), 1e-7);
  // J^T (J v) consistency: <J v, g> == <v, J^T g>
  const Eigen::MatrixXd g = Eigen::MatrixXd::Random(3, 3);
  EXPECT_NEAR((jv.array() * g.array()).sum(), v.dot(net.backward(cache, g)), 1e-10);
}

TEST(Gaussian, LogProbAtMeanUnitStd) {
  for (int d : {1, 2, 5}) {
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(d, -1, 1);
    const double lp = gaussian_log_prob<double>(x, x, Eigen::VectorXd::Zero(d));
    EXPECT_NEAR(lp, -0.5 * d * std::log(2 * std::numbers::pi), 1e-12);
  }
}

TEST(Gaussian, KlAndEntropy) {
  Eigen::MatrixXd m(2, 1);
  m << 0.3, -0.2;
  const Eigen::VectorXd ls = Eigen::VectorXd::Constant(2, -0.5);
  EXPECT_NEAR(gaussian_kl<double>(m, ls, m, ls)(0), 0.0, 1e-15);
  Eigen::MatrixXd m2 = m;
  m2(0) += 0.1;
  const double expected = 0.5 * 0.01 / std::exp(-1.0);
  EXPECT_NEAR(gaussian_kl<double>(m, ls, m2, ls)(0), expected, 1e-12);
  EXPECT_NEAR(gaussian_entropy<double>(Eigen::VectorXd::Zero(1)),
              0.5 * (1 + std::log(2 * std::numbers::pi)), 1e-15);
}

TEST(Gaussian, TanhLogDetMatchesDirectFormula) {
  Eigen::MatrixXd u(2, 3);
  u << 0.0, 1.5, -3.0, 0.2, -0.7, 8.0;
  const auto got = tanh_log_det<double>(u);
  for (int c = 0; c < 3; ++c) {
    double expect = 0;
    for (int r = 0; r < 2; ++r) expect += std::log(1 - std::tanh(u(r, c)) * std::tanh(u(r, c)));
    EXPECT_NEAR(got(c), expect, 1e-6);
  }
}

TEST(Gaussian, LogProbGradientMatchesFiniteDifferences) {
  const auto r = oracles::log_prob_gradient_check(5, 12);
  EXPECT_LT(r.max_rel_error, 1e-5) << r.checked << " coordinates";
}

TEST(Gaussian, SamplingStatistics) {
  std::mt19937_64 rng(5);
  Mlp net({1, 2}, Activation::kTanh, Activation::kIdentity);
  net.layers()[0].bias << 0.5, -1.0;
  GaussianPolicy pol(net, std::log(0.3));
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(2), sq = Eigen::VectorXd::Zero(2);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd s = pol.sample(Eigen::VectorXd::Zero(1), rng);
    sum += s;
    sq += s.cwiseAbs2();
  }
  const Eigen::VectorXd mean = sum / n;
  EXPECT_NEAR(mean(0), 0.5, 0.01);
  EXPECT_NEAR(mean(1), -1.0, 0.01);
  EXPECT_NEAR(std::sqrt(sq(0) / n - mean(0) * mean(0)), 0.3, 0.01);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(4, -1, 1);
  const Eigen::VectorXd p0 = p;
  Adam opt;
  for (int i = 0; i < 5; ++i) opt.step(p, Eigen::VectorXd::Zero(4));
  EXPECT_EQ(p, p0);
}

TEST(Adam, FirstStepOpposesGradientWithMagnitudeLr) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd g(3);
  g << 2.0, -0.5, 1e-3;
  Adam opt(AdamConfig{.lr = 0.01});
  opt.step(p, g);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(std::signbit(p(i)), !std::signbit(g(i)));
    EXPECT_NEAR(std::abs(p(i)), 0.01, 1e-6);
  }
}

TEST(Adam, ConstantGradientStepTendsToLr) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(1);
  Adam opt(AdamConfig{.lr = 0.001});
  double last = 0;
  for (int i = 0; i < 1000; ++i) {
    const double before = p(0);
    opt.step(p, Eigen::VectorXd::Constant(1, 0.7));
    last = before - p(0);
  }
  EXPECT_NEAR(last, 0.001, 1e-8);
}

TEST(Adam, RejectsNonFinite) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(2);
  Adam opt;
  Eigen::VectorXd g(2);
  g << 1.0, NAN;
  EXPECT_THROW(opt.step(p, g), std::domain_error);
  EXPECT_THROW(opt.step(p, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(Adam, ClipNorm) {
  Eigen::VectorXd g(2);
  g << 3.0, 4.0;
  clip_norm(g, 1.0);
  EXPECT_NEAR(g.norm(), 1.0, 1e-15);
  EXPECT_NEAR(g(0), 0.6, 1e-15);
  clip_norm(g, 10.0);
  EXPECT_NEAR(g.norm(), 1.0, 1e-15);
}
