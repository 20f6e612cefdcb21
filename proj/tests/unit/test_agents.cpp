#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "rdrl/agents/agent.hpp"
#include "rdrl/agents/cg.hpp"
#include "rdrl/agents/checkpoint.hpp"
#include "rdrl/agents/ddpg.hpp"
#include "rdrl/agents/ppo.hpp"
#include "rdrl/agents/replay_buffer.hpp"
#include "rdrl/agents/rollout.hpp"
#include "rdrl/agents/trainer.hpp"
#include "rdrl/agents/trpo.hpp"
#include "rdrl/common/strict_json.hpp"

using namespace rdrl;
using namespace rdrl::agents;

namespace {

RolloutBatch hand_batch() {
  RolloutBatch b;
  b.reward = Eigen::RowVectorXd(4);
  b.reward << 1.0, 0.0, 2.0, 1.0;
  b.value = Eigen::RowVectorXd(4);
  b.value << 0.5, 0.2, 0.1, 0.3;
  b.next_value = Eigen::RowVectorXd(4);
  b.next_value << 0.2, 0.0, 0.3, 0.7;  // step 1 ends in a terminal state
  b.segment_end = {false, true, false, false};
  b.obs = Eigen::MatrixXd::Zero(1, 4);
  b.raw_action = Eigen::MatrixXd::Zero(1, 4);
  b.old_mean = Eigen::MatrixXd::Zero(1, 4);
  b.log_prob = Eigen::RowVectorXd::Zero(4);
  return b;
}

// One-state bandit: actions +1 (rewarded) and -1, both in every batch.
RolloutBatch bandit_batch(const nn::GaussianPolicy& policy) {
  RolloutBatch b;
  b.obs = Eigen::MatrixXd::Ones(1, 2);
  b.raw_action = Eigen::MatrixXd(1, 2);
  b.raw_action << 1.0, -1.0;
  b.old_mean = policy.mean(b.obs);
  b.old_log_std = policy.log_std();
  b.log_prob = policy.log_prob(b.obs, b.raw_action);
  b.reward = Eigen::RowVectorXd(2);
  b.reward << 1.0, 0.0;
  b.value = Eigen::RowVectorXd::Zero(2);
  b.next_value = Eigen::RowVectorXd::Zero(2);
  b.segment_end = {true, true};
  b.advantage = Eigen::RowVectorXd(2);
  b.advantage << 1.0, -1.0;
  b.ret = b.reward;
  return b;
}

double preference(const nn::GaussianPolicy& policy) {
  const Eigen::MatrixXd obs = Eigen::MatrixXd::Ones(1, 2);
  Eigen::MatrixXd u(1, 2);
  u << 1.0, -1.0;
  const auto lp = policy.log_prob(obs, u);
  return lp(0) - lp(1);
}

ActorCritic tiny_actor_critic(std::uint64_t seed) {
  Rng rng(seed);
  return make_actor_critic(1, 1, {8}, -0.5, rng);
}

env::EnvConfig quick_env() {
  env::EnvConfig e;
  e.ambient_vehicles = 0;
  e.episode_seconds = 6.0;
  return e;
}

}  // namespace

TEST(Gae, HandComputed) {
  auto b = hand_batch();
  const double g = 0.9, l = 0.8;
  compute_gae(b, g, l);
  const double d0 = 1.0 + g * 0.2 - 0.5, d1 = 0.0 - 0.2, d2 = 2.0 + g * 0.3 - 0.1,
               d3 = 1.0 + g * 0.7 - 0.3;
  EXPECT_NEAR(b.advantage(3), d3, 1e-12);
  EXPECT_NEAR(b.advantage(2), d2 + g * l * d3, 1e-12);
  EXPECT_NEAR(b.advantage(1), d1, 1e-12);
  EXPECT_NEAR(b.advantage(0), d0 + g * l * d1, 1e-12);
  EXPECT_NEAR((b.ret - b.advantage - b.value).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(Gae, LambdaOneIsDiscountedReturnMinusValue) {
  auto b = hand_batch();
  b.segment_end = {false, false, false, true};
  b.next_value << 0.2, 0.1, 0.3, 0.0;
  b.next_value(0) = b.value(1);
  b.next_value(1) = b.value(2);
  b.next_value(2) = b.value(3);
  compute_gae(b, 0.9, 1.0);
  const double ret0 = 1.0 + 0.9 * (0.0 + 0.9 * (2.0 + 0.9 * 1.0));
  EXPECT_NEAR(b.ret(0), ret0, 1e-12);
}

TEST(Gae, NormalizeAdvantages) {
  auto b = hand_batch();
  compute_gae(b, 0.99, 0.95);
  normalize_advantages(b);
  EXPECT_NEAR(b.advantage.mean(), 0.0, 1e-12);
  EXPECT_NEAR(b.advantage.squaredNorm() / 4.0, 1.0, 1e-12);
  b.advantage.setConstant(3.0);
  normalize_advantages(b);
  EXPECT_EQ(b.advantage, Eigen::RowVectorXd::Zero(4));
}

TEST(Rollout, BufferFillsAndTakes) {
  RolloutBuffer buf(3, 2, 2);
  const Eigen::VectorXd o = Eigen::VectorXd::Ones(3), a = Eigen::VectorXd::Zero(2);
  buf.add(o, a, a, -1.0, 1.0, 0.5, 0.4, false);
  EXPECT_FALSE(buf.full());
  buf.cut(0.9);
  buf.add(o, a, a, -1.0, 1.0, 0.5, 0.4, true);
  EXPECT_TRUE(buf.full());
  EXPECT_THROW(buf.add(o, a, a, 0, 0, 0, 0, false), std::logic_error);
  const auto batch = buf.take();
  EXPECT_EQ(batch.size(), 2);
  EXPECT_TRUE(batch.segment_end[0]);
  EXPECT_EQ(batch.next_value(0), 0.9);
  EXPECT_EQ(buf.size(), 0);
  EXPECT_NO_THROW(batch.validate());
}

TEST(Replay, RingAndDistinctSampling) {
  ReplayBuffer rb(5, 1, 1);
  Rng rng(1);
  EXPECT_THROW(rb.sample(1, rng), std::invalid_argument);
  for (int i = 0; i < 8; ++i)
    rb.add(Eigen::VectorXd::Constant(1, i), Eigen::VectorXd::Zero(1), i, Eigen::VectorXd::Zero(1),
           i % 2 == 0);
  EXPECT_EQ(rb.size(), 5);
  for (int rep = 0; rep < 50; ++rep) {
    const auto b = rb.sample(5, rng);
    std::set<double> seen(b.obs.data(), b.obs.data() + 5);
    EXPECT_EQ(seen, (std::set<double>{3, 4, 5, 6, 7}));
    for (int k = 0; k < 5; ++k) {
      EXPECT_EQ(b.reward(k), b.obs(0, k));
      EXPECT_EQ(b.done(k), static_cast<int>(b.obs(0, k)) % 2 == 0 ? 1.0 : 0.0);
    }
  }
  EXPECT_THROW(rb.sample(6, rng), std::invalid_argument);
  EXPECT_THROW(rb.add(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(1), 0, Eigen::VectorXd::Zero(1), false),
               std::invalid_argument);
}

TEST(Cg, MatchesDenseSolve) { EXPECT_LT(oracles::cg_max_error(20, 3), 1e-8); }

TEST(Cg, FlagsNonPositiveCurvature) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  a(1, 1) = -1.0;
  Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
  b(0) = 0.0;
  b(2) = 0.0;
  const auto r = conjugate_gradient<double>([&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return a * v; },
                                            b, 10);
  EXPECT_TRUE(r.breakdown);
}

TEST(Trpo, FisherVectorProductMatchesKlCurvature) {
  Rng rng(9);
  auto ac = make_actor_critic(4, 2, {16}, -0.4, rng);
  RolloutBatch b;
  b.obs = Eigen::MatrixXd::Random(4, 6);
  b.old_mean = ac.policy.mean(b.obs);
  b.old_log_std = ac.policy.log_std();
  nn::Mlp::Cache cache;
  ac.policy.mean_net().forward(b.obs, cache);
  const Eigen::VectorXd theta = ac.policy.parameters();
  for (int trial = 0; trial < 3; ++trial) {
    const Eigen::VectorXd v = Eigen::VectorXd::Random(theta.size());
    const double vfv = v.dot(fisher_vector_product(ac.policy, cache, v, 0.0));
    const double h = 1e-4;
    auto p = ac.policy;
    p.set_parameters(theta + h * v);
    const double kl = mean_kl(p, b);
    EXPECT_NEAR(2.0 * kl / (h * h), vfv, 1e-3 * std::abs(vfv));
    const Eigen::VectorXd damped = fisher_vector_product(ac.policy, cache, v, 0.5);
    EXPECT_NEAR(v.dot(damped), vfv + 0.5 * v.squaredNorm(), 1e-9 * std::abs(vfv));
  }
}

TEST(Trpo, ZeroAdvantagesChangeNothing) {
  auto ac = tiny_actor_critic(2);
  auto b = bandit_batch(ac.policy);
  b.advantage.setZero();
  const Eigen::VectorXd before = ac.policy.parameters();
  nn::Adam opt;
  Rng rng(1);
  const auto r = trpo_update(ac.policy, ac.value, opt, b, TrpoParams{}, rng);
  EXPECT_TRUE(r.zero_gradient);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(ac.policy.parameters(), before);
}

TEST(Trpo, BanditImprovesMonotonicallyWithinTrustRegion) {
  auto ac = tiny_actor_critic(3);
  nn::Adam opt;
  Rng rng(1);
  TrpoParams hp;
  double pref = preference(ac.policy);
  for (int i = 0; i < 50; ++i) {
    const auto b = bandit_batch(ac.policy);
    const auto r = trpo_update(ac.policy, ac.value, opt, b, hp, rng);
    ASSERT_TRUE(r.accepted) << i;
    EXPECT_LE(r.kl, hp.max_kl);
    EXPECT_GT(r.surrogate_after, r.surrogate_before);
    const double now = preference(ac.policy);
    ASSERT_GT(now, pref) << "update " << i;
    pref = now;
  }
}

TEST(Ppo, SurrogateAtOldPolicyIsVanillaGradient) {
  Rng rng(4);
  auto ac = make_actor_critic(3, 2, {8}, -0.5, rng);
  RolloutBatch b;
  b.obs = Eigen::MatrixXd::Random(3, 5);
  b.old_mean = ac.policy.mean(b.obs);
  b.old_log_std = ac.policy.log_std();
  b.raw_action = b.old_mean + 0.3 * Eigen::MatrixXd::Random(2, 5);
  b.log_prob = ac.policy.log_prob(b.obs, b.raw_action);
  b.advantage = Eigen::RowVectorXd::Random(5);
  b.reward = Eigen::RowVectorXd::Zero(5);
  const auto s = ppo_surrogate(ac.policy, b, 0.2, 0.0);
  nn::Mlp::Cache cache;
  ac.policy.mean_net().forward(b.obs, cache);
  const Eigen::VectorXd vanilla = ac.policy.log_prob_gradient(cache, b.raw_action, b.advantage / 5.0);
  EXPECT_LT((s.gradient - vanilla).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(s.objective, b.advantage.mean(), 1e-12);
  EXPECT_EQ(s.clip_fraction, 0.0);
  EXPECT_NEAR(mean_kl(ac.policy, b), 0.0, 1e-15);
}

TEST(Ppo, ZeroAdvantagesLeavePolicyUnchanged) {
  auto ac = tiny_actor_critic(5);
  auto b = bandit_batch(ac.policy);
  b.advantage.setZero();
  PpoParams hp;
  hp.entropy_coef = 0.0;
  hp.minibatch = 2;
  const Eigen::VectorXd before = ac.policy.parameters();
  nn::Adam popt, vopt;
  Rng rng(1);
  ppo_update(ac.policy, ac.value, popt, vopt, b, hp, rng);
  EXPECT_EQ(ac.policy.parameters(), before);
}

TEST(Ppo, BanditImprovesMonotonically) {
  auto ac = tiny_actor_critic(6);
  PpoParams hp;
  hp.entropy_coef = 0.0;
  hp.minibatch = 2;
  hp.epochs = 4;
  hp.policy_lr = 1e-2;
  nn::Adam popt(nn::AdamConfig{hp.policy_lr}), vopt;
  Rng rng(1);
  double pref = preference(ac.policy);
  for (int i = 0; i < 50; ++i) {
    const auto b = bandit_batch(ac.policy);
    ppo_update(ac.policy, ac.value, popt, vopt, b, hp, rng);
    const double now = preference(ac.policy);
    ASSERT_GT(now, pref) << "update " << i;
    pref = now;
  }
}

TEST(Ppo, ClippingStopsGradientOutsideRange) {
  auto ac = tiny_actor_critic(7);
  auto b = bandit_batch(ac.policy);
  b.log_prob.array() -= 1.0;  // ratio e > 1 + clip
  const auto s = ppo_surrogate(ac.policy, b, 0.2, 0.0);
  EXPECT_EQ(s.clip_fraction, 1.0);
  // positive advantage clipped: no gradient from sample 0; negative advantage keeps it
  nn::Mlp::Cache cache;
  ac.policy.mean_net().forward(b.obs, cache);
  Eigen::RowVectorXd w(2);
  w << 0.0, -std::exp(1.0) / 2.0;
  const Eigen::VectorXd expected = ac.policy.log_prob_gradient(cache, b.raw_action, w);
  EXPECT_LT((s.gradient - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Ddpg, TauOneCopiesOnlineNets) {
  Rng rng(1);
  auto nets = make_ddpg_nets(3, 2, {8, 8}, rng);
  ReplayBatch b;
  b.obs = Eigen::MatrixXd::Random(3, 4);
  b.action = Eigen::MatrixXd::Random(2, 4);
  b.next_obs = Eigen::MatrixXd::Random(3, 4);
  b.reward = Eigen::RowVectorXd::Random(4);
  b.done = Eigen::RowVectorXd::Zero(4);
  DdpgParams hp;
  hp.tau = 1.0;
  nn::Adam aopt, copt;
  ddpg_update(nets, aopt, copt, b, hp);
  EXPECT_EQ(nets.actor_target.parameters(), nets.actor.parameters());
  EXPECT_EQ(nets.critic_target.parameters(), nets.critic.parameters());
}

TEST(Ddpg, ZeroDiscountTargetsAreRewards) {
  Rng rng(2);
  auto nets = make_ddpg_nets(3, 2, {8}, rng);
  ReplayBatch b;
  b.next_obs = Eigen::MatrixXd::Random(3, 4);
  b.reward = Eigen::RowVectorXd::Random(4);
  b.done = Eigen::RowVectorXd::Zero(4);
  EXPECT_EQ(critic_targets(nets, b, 0.0), b.reward);
  b.done.setOnes();
  EXPECT_EQ(critic_targets(nets, b, 0.99), b.reward);
}

TEST(Ddpg, SoftUpdateContractsGeometrically) {
  Rng rng(3);
  auto nets = make_ddpg_nets(3, 2, {8}, rng);
  auto other = make_ddpg_nets(3, 2, {8}, rng);
  nn::Mlp target = other.actor;
  const double tau = 0.1;
  double dist = (target.parameters() - nets.actor.parameters()).norm();
  for (int i = 0; i < 20; ++i) {
    soft_update(target, nets.actor, tau);
    const double next = (target.parameters() - nets.actor.parameters()).norm();
    EXPECT_NEAR(next, (1 - tau) * dist, 1e-12 * dist + 1e-15);
    dist = next;
  }
}

TEST(Ddpg, CriticLearnsConstantReward) {
  Rng rng(4);
  auto nets = make_ddpg_nets(2, 1, {16}, rng);
  DdpgParams hp;
  hp.gamma = 0.0;
  nn::Adam aopt(nn::AdamConfig{1e-4}), copt(nn::AdamConfig{1e-2});
  ReplayBatch b;
  b.obs = Eigen::MatrixXd::Random(2, 32);
  b.action = Eigen::MatrixXd::Random(1, 32);
  b.next_obs = b.obs;
  b.reward = Eigen::RowVectorXd::Constant(32, 0.7);
  b.done = Eigen::RowVectorXd::Zero(32);
  DdpgLosses l;
  for (int i = 0; i < 300; ++i) l = ddpg_update(nets, aopt, copt, b, hp);
  EXPECT_LT(l.critic_loss, 1e-3);
  EXPECT_NEAR(l.mean_q, 0.7, 0.05);
}

TEST(Checkpoint, RoundTripIsExact) {
  Rng rng(5);
  Checkpoint c;
  c.metadata = {{"algorithm", "ppo"}, {"x", 1.5}};
  c.add("net", nn::Mlp::orthogonal({3, 4, 2}, nn::Activation::kTanh, nn::Activation::kTanh, rng));
  c.add("vec", Eigen::VectorXd::LinSpaced(3, -1, 1));
  std::stringstream ss;
  write_checkpoint(ss, c);
  const std::string bytes = ss.str();
  EXPECT_EQ(bytes.substr(0, 8), "RDRLCKPT");
  std::stringstream in(bytes);
  const Checkpoint r = read_checkpoint(in);
  EXPECT_EQ(r.metadata, c.metadata);
  EXPECT_EQ(r.mlp("net").parameters(), c.mlp("net").parameters());
  EXPECT_EQ(r.mlp("net").layers().back().activation, nn::Activation::kTanh);
  EXPECT_EQ(r.vector("vec"), c.vector("vec"));
  std::stringstream again;
  write_checkpoint(again, r);
  EXPECT_EQ(again.str(), bytes);
  EXPECT_THROW(r.block("missing"), CheckpointError);
}

TEST(Checkpoint, RejectsCorruptInput) {
  Checkpoint c;
  c.add("vec", Eigen::VectorXd::Ones(4));
  std::stringstream ss;
  write_checkpoint(ss, c);
  std::string bytes = ss.str();
  std::stringstream truncated(bytes.substr(0, bytes.size() - 5));
  EXPECT_THROW(read_checkpoint(truncated), CheckpointError);
  std::string bad = bytes;
  bad[0] = 'X';
  std::stringstream bad_magic(bad);
  EXPECT_THROW(read_checkpoint(bad_magic), CheckpointError);
  EXPECT_THROW(load_checkpoint("/nonexistent/ckpt.bin"), CheckpointError);
}

TEST(Agents, CheckpointRestoresBehaviour) {
  for (auto algo : {Algorithm::kPpo, Algorithm::kTrpo, Algorithm::kDdpg}) {
    Rng rng(6);
    Hyperparams hp;
    auto agent = make_agent(algo, 42, 2, hp, rng);
    Checkpoint c = agent->checkpoint();
    c.metadata = {{"algorithm", std::string(to_string(algo))},
                  {"observation_size", 42},
                  {"action_size", 2},
                  {"hyperparams", to_json(hp)}};
    auto copy = agent_from_checkpoint(c);
    EXPECT_EQ(copy->algorithm(), algo);
    const Eigen::VectorXd obs = Eigen::VectorXd::Random(42);
    EXPECT_EQ(copy->act_deterministic(obs), agent->act_deterministic(obs));
    const Eigen::VectorXd a = agent->act_deterministic(obs);
    EXPECT_TRUE((a.array().abs() <= 1.0).all());
  }
  Checkpoint bad;
  EXPECT_THROW(agent_from_checkpoint(bad), CheckpointError);
}

TEST(Agents, RestoreRejectsWrongShapes) {
  Rng rng(7);
  auto a = make_agent(Algorithm::kPpo, 42, 2, Hyperparams{}, rng);
  auto b = make_agent(Algorithm::kPpo, 35, 2, Hyperparams{}, rng);
  EXPECT_THROW(b->restore(a->checkpoint()), CheckpointError);
}

TEST(Agents, ParseAlgorithm) {
  EXPECT_EQ(parse_algorithm("trpo"), Algorithm::kTrpo);
  EXPECT_THROW(parse_algorithm("sac"), std::invalid_argument);
}

TEST(Hyperparams, JsonRoundTripAndStrictness) {
  Hyperparams hp;
  hp.ppo.clip = 0.1;
  hp.ddpg.tau = 0.01;
  hp.hidden = {32, 16};
  Hyperparams back;
  merge_json(to_json(hp), back);
  EXPECT_EQ(to_json(back), to_json(hp));
  EXPECT_THROW(merge_json(nlohmann::json{{"ppo", {{"clipp", 0.1}}}}, back), ConfigError);
  EXPECT_THROW(merge_json(nlohmann::json{{"ppo", {{"clip", "big"}}}}, back), ConfigError);
  hp.ppo.clip = -1;
  EXPECT_THROW(hp.validate(), ConfigError);
}

TEST(Trainer, ZeroEpisodesKeepsInitialization) {
  TrainConfig cfg;
  cfg.env = quick_env();
  cfg.seed = 3;
  cfg.episodes = 0;
  const auto result = train(cfg);
  EXPECT_TRUE(result.curve.empty());
  Rng rng = make_rng(3, "policy-init");
  auto fresh = make_agent(Algorithm::kPpo, 42, 2, cfg.hp, rng);
  const Checkpoint init = fresh->checkpoint();
  for (const auto& blk : init.blocks) EXPECT_EQ(result.checkpoint.block(blk.name).values, blk.values);
  EXPECT_EQ(result.checkpoint.metadata.at("episodes"), 0);
}

TEST(Trainer, SameSeedSameCurve) {
  for (auto algo : {Algorithm::kPpo, Algorithm::kTrpo, Algorithm::kDdpg}) {
    TrainConfig cfg;
    cfg.algorithm = algo;
    cfg.env = quick_env();
    cfg.seed = 11;
    cfg.episodes = 12;
    cfg.hp.ppo.rollout_steps = 64;
    cfg.hp.trpo.rollout_steps = 64;
    cfg.hp.ddpg.warmup_steps = 50;
    std::ostringstream a, b;
    const auto ra = train(cfg, {}, &a);
    train(cfg, {}, &b);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(ra.curve.size(), 12u);
    int updated = 0;
    for (const auto& r : ra.curve) updated += r.updates;
    EXPECT_GT(updated, 0) << to_string(algo);
    cfg.seed = 12;
    std::ostringstream c;
    train(cfg, {}, &c);
    EXPECT_NE(a.str(), c.str());
  }
}

TEST(Trainer, TrpoStepsRespectTrustRegion) {
  TrainConfig cfg;
  cfg.algorithm = Algorithm::kTrpo;
  cfg.env = quick_env();
  cfg.seed = 5;
  cfg.episodes = 30;
  cfg.hp.trpo.rollout_steps = 128;
  const auto r = train(cfg);
  ASSERT_FALSE(r.trpo_steps.empty());
  for (const auto& s : r.trpo_steps) {
    if (s.accepted) {
      EXPECT_LE(s.kl, cfg.hp.trpo.max_kl);
    } else {
      EXPECT_EQ(s.kl, 0.0);
    }
  }
}

TEST(Trainer, StopConditionEndsEarly) {
  TrainConfig cfg;
  cfg.env = quick_env();
  cfg.episodes = 10;
  const auto r = train(cfg, [](const std::vector<EpisodeRecord>& c) { return c.size() == 3; });
  EXPECT_EQ(r.curve.size(), 3u);
  EXPECT_TRUE(r.stopped_early);
  EXPECT_EQ(trailing_mean_return(r.curve, 2),
            (r.curve[1].episode_return + r.curve[2].episode_return) / 2.0);
}

TEST(Trainer, CurveCsvLayout) {
  TrainConfig cfg;
  cfg.env = quick_env();
  cfg.episodes = 2;
  std::ostringstream os;
  train(cfg, {}, &os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "episode,steps,total_steps,episode_return,mean_reward,cause,policy_loss,value_loss,entropy,"
            "approx_kl,clip_fraction");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
    ++rows;
  }
  EXPECT_EQ(rows, 2);
}

TEST(Trainer, RandomBaselineIsDeterministic) {
  const auto e = quick_env();
  EXPECT_EQ(random_policy_baseline(e, 1, 3), random_policy_baseline(e, 1, 3));
  EXPECT_THROW(random_policy_baseline(e, 1, 0), std::invalid_argument);
}
