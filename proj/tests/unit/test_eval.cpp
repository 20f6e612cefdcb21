#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rdrl/agents/trainer.hpp"
#include "rdrl/eval/ahp.hpp"
#include "rdrl/eval/evaluation.hpp"
#include "rdrl/eval/metrics.hpp"

using namespace rdrl;
using namespace rdrl::eval;

namespace {

env::EnvConfig empty_ring() {
  env::EnvConfig c;
  c.ambient_vehicles = 0;
  return c;
}

Policy centerline(double speed) {
  return [speed](const env::DrivingEnv& e, const Eigen::VectorXd&) {
    return e.route_following_action(speed);
  };
}

agents::Checkpoint untrained_checkpoint(agents::Algorithm algo) {
  agents::TrainConfig cfg;
  cfg.algorithm = algo;
  cfg.env = empty_ring();
  cfg.episodes = 0;
  return agents::train(cfg).checkpoint;
}

}  // namespace

TEST(Metrics, CollisionScore) {
  EXPECT_DOUBLE_EQ(collision_rate_score(0, 6000), 1.0);
  EXPECT_NEAR(collision_rate_score(2, 10000), 0.8, 1e-12);
  EXPECT_EQ(collision_rate_score(10, 5000), 0.0);
  EXPECT_THROW(collision_rate_score(1, 0), std::invalid_argument);
}

TEST(Metrics, ReferenceRowTotals) {
  const Indicators ddpg{0.43, 0.8653, 0.8872, 0.8846, 0.8058};
  const Indicators ppo{0.68, 0.8385, 0.8784, 0.9836, 0.8103};
  const Indicators trpo{0.73, 0.9322, 0.9295, 0.8627, 0.7995};
  EXPECT_NEAR(score(ddpg), 0.6606, 1e-3);
  EXPECT_NEAR(score(ppo), 0.7769, 1e-3);
  EXPECT_NEAR(score(trpo), 0.8267, 1e-3);
}

TEST(Metrics, WeightValidation) {
  WeightVector w;
  EXPECT_NO_THROW(w.validate());
  w.values = {0.5, 0.5, 0.5, 0.0, 0.0};
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w.values = {1.2, -0.2, 0.0, 0.0, 0.0};
  EXPECT_THROW(w.validate(), std::invalid_argument);
}

TEST(Metrics, JsonRoundTripAndMerge) {
  MetricReport a;
  a.lane_centering = 0.9;
  a.efficiency = 0.5;
  a.comfort = 0.8;
  a.energy = 0.7;
  a.rounds = 2;
  a.total_steps = 100;
  a.collisions = 0;
  a.finalize();
  const auto back = report_from_json(to_json(a));
  EXPECT_EQ(to_json(back), to_json(a));
  MetricReport b = a;
  b.lane_centering = 0.6;
  b.total_steps = 300;
  b.collisions = 1;
  b.finalize();
  const auto m = merge(a, b);
  EXPECT_EQ(m.total_steps, 400);
  EXPECT_EQ(m.rounds, 4);
  EXPECT_NEAR(m.lane_centering, (0.9 * 100 + 0.6 * 300) / 400.0, 1e-12);
  EXPECT_NEAR(m.collision_rate_score, collision_rate_score(1, 400), 1e-12);
  EXPECT_NEAR(m.total_score, score(m.indicators()), 1e-12);
  std::ostringstream os;
  write_indicator_csv(os, a);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "collision_rate_score,lane_centering,efficiency,comfort,energy");
}

TEST(Ahp, RecoversDefaultWeights) {
  const WeightVector table;
  Eigen::VectorXd w(5);
  for (int i = 0; i < 5; ++i) w(i) = table.values[i];
  const auto r = ahp_weights<double>(consistent_matrix<double>(w));
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(r.weights(i), w(i) / w.sum(), 1e-6);
  EXPECT_LT(r.consistency_ratio, 1e-8);
  EXPECT_FALSE(r.inconsistent);
}

TEST(Ahp, AllOnesIsUniform) {
  const auto r = ahp_weights<double>(Eigen::MatrixXd::Ones(3, 3));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.weights(i), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.consistency_ratio, 0.0, 1e-12);
}

TEST(Ahp, InconsistentJudgementsAreFlagged) {
  Eigen::MatrixXd a(3, 3);
  a << 1, 9, 1.0 / 9, 1.0 / 9, 1, 9, 9, 1.0 / 9, 1;
  const auto r = ahp_weights<double>(a);
  EXPECT_TRUE(r.inconsistent);
  EXPECT_GT(r.consistency_ratio, 0.1);
}

TEST(Ahp, Preconditions) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(3, 3);
  a(0, 1) = 2.0;  // a(1, 0) stays 1
  EXPECT_THROW(ahp_weights<double>(a), AhpError);
  EXPECT_THROW(ahp_weights<double>(Eigen::MatrixXd::Ones(2, 2)), AhpError);
  EXPECT_THROW(ahp_weights<double>(Eigen::MatrixXd::Ones(3, 4)), AhpError);
  Eigen::MatrixXd z = Eigen::MatrixXd::Ones(3, 3);
  z(0, 0) = 0.0;
  EXPECT_THROW(ahp_weights<double>(z), AhpError);
  EXPECT_NEAR(random_index(5), 1.12, 1e-12);
}

TEST(Ahp, LongDoubleAgrees) {
  Eigen::Matrix<long double, Eigen::Dynamic, 1> w(4);
  w << 4, 3, 2, 1;
  const auto r = ahp_weights<long double>(consistent_matrix<long double>(w), 1e-15L);
  EXPECT_NEAR(static_cast<double>(r.weights(0)), 0.4, 1e-12);
}

TEST(Evaluation, CenterlineControllerKeepsLane) {
  EvalOptions opt;
  opt.rounds = 5;
  const auto r = evaluate_policy(centerline(8.0), empty_ring(), opt);
  EXPECT_GT(r.lane_centering, 0.95);
  EXPECT_EQ(r.collisions, 0);
  EXPECT_EQ(r.arrivals, 5);
  EXPECT_EQ(r.collision_rate_score, 1.0);
  for (double v : r.indicators()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_NEAR(r.total_score, score(r.indicators(), r.weights), 1e-12);
}

TEST(Evaluation, DeterministicAndSplittable) {
  EvalOptions opt;
  opt.rounds = 4;
  opt.seed = 9;
  env::EnvConfig cfg;
  const auto a = evaluate_policy(centerline(9.0), cfg, opt);
  const auto b = evaluate_policy(centerline(9.0), cfg, opt);
  EXPECT_EQ(to_json(a), to_json(b));
  EvalOptions first = opt, second = opt;
  first.rounds = 2;
  second.rounds = 2;
  second.first_round = 2;
  const auto m = merge(evaluate_policy(centerline(9.0), cfg, first),
                       evaluate_policy(centerline(9.0), cfg, second));
  EXPECT_EQ(m.total_steps, a.total_steps);
  EXPECT_NEAR(m.lane_centering, a.lane_centering, 1e-12);
  EXPECT_NEAR(m.total_score, a.total_score, 1e-12);
}

TEST(Evaluation, RoundsMustBePositive) {
  EvalOptions opt;
  opt.rounds = 0;
  try {
    evaluate_policy(centerline(5.0), empty_ring(), opt);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "rounds must be >= 1");
  }
}

TEST(Evaluation, CheckpointShapeMismatch) {
  const auto ckpt = untrained_checkpoint(agents::Algorithm::kTrpo);
  auto cfg = empty_ring();
  cfg.observed_vehicles = 3;
  EvalOptions opt;
  opt.rounds = 1;
  EXPECT_THROW(run_evaluation(ckpt, cfg, opt), std::invalid_argument);
  const auto r = run_evaluation(ckpt, empty_ring(), opt);
  EXPECT_EQ(r.rounds, 1);
}

TEST(Adaptability, CenterlineOnHighwayHasNoLateralError) {
  env::EnvConfig cfg;
  cfg.ambient_vehicles = 0;
  const auto entries = adaptability_report(centerline(12.0), cfg, {env::Scenario::kHighway}, 3, 1);
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_LT(entries[0].mean_abs_lateral, 1e-6);
  EXPECT_EQ(entries[0].lane_changes, 0);
  EXPECT_EQ(entries[0].min_ttc.size(), 3u);
}

TEST(Adaptability, StationaryPolicyHasZeroSpeed) {
  env::EnvConfig cfg;
  cfg.ambient_vehicles = 0;
  cfg.ego_speed_ratio = 0.0;
  cfg.episode_seconds = 4.0;
  Policy stop = [](const env::DrivingEnv&, const Eigen::VectorXd&) { return env::ContinuousAction{}; };
  const auto entries = adaptability_report(stop, cfg, {env::Scenario::kHighway, env::Scenario::kMerge}, 2, 1);
  for (const auto& e : entries) EXPECT_EQ(e.mean_speed_ratio, 0.0);
}

TEST(Adaptability, CheckpointRunsOnOtherScenarios) {
  const auto ckpt = untrained_checkpoint(agents::Algorithm::kTrpo);
  env::EnvConfig base;
  base.episode_seconds = 10.0;
  const auto entries = adaptability_report(ckpt, base, {env::Scenario::kHighway, env::Scenario::kMerge}, 3, 2);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].scenario, "highway");
  EXPECT_EQ(entries[1].scenario, "merge");
  const auto j = to_json(entries[1]);
  EXPECT_EQ(j.at("min_ttc_per_round").size(), 3u);
}
