#include "rdrl/agents/rollout.hpp"

#include <cmath>
#include <stdexcept>

namespace rdrl::agents {

void RolloutBatch::validate() const {
  const Eigen::Index n = size();
  if (obs.cols() != n || raw_action.cols() != n || old_mean.cols() != n || log_prob.size() != n ||
      value.size() != n || next_value.size() != n ||
      segment_end.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("rollout batch fields have inconsistent lengths");
}

RolloutBuffer::RolloutBuffer(int obs_dim, int action_dim, int capacity) : capacity_(capacity) {
  if (capacity <= 0) throw std::invalid_argument("rollout capacity must be positive");
  batch_.obs.resize(obs_dim, capacity);
  batch_.raw_action.resize(action_dim, capacity);
  batch_.old_mean.resize(action_dim, capacity);
  batch_.log_prob.resize(capacity);
  batch_.reward.resize(capacity);
  batch_.value.resize(capacity);
  batch_.next_value.resize(capacity);
  batch_.segment_end.assign(capacity, false);
}

void RolloutBuffer::add(const Eigen::VectorXd& obs, const Eigen::VectorXd& raw_action,
                        const Eigen::VectorXd& mean, double log_prob, double reward, double value,
                        double next_value, bool segment_end) {
  if (full()) throw std::logic_error("rollout buffer is full");
  batch_.obs.col(count_) = obs;
  batch_.raw_action.col(count_) = raw_action;
  batch_.old_mean.col(count_) = mean;
  batch_.log_prob(count_) = log_prob;
  batch_.reward(count_) = reward;
  batch_.value(count_) = value;
  batch_.next_value(count_) = next_value;
  batch_.segment_end[count_] = segment_end;
  ++count_;
}

void RolloutBuffer::cut(double next_value) {
  if (count_ == 0) return;
  batch_.next_value(count_ - 1) = next_value;
  batch_.segment_end[count_ - 1] = true;
}

RolloutBatch RolloutBuffer::take() {
  RolloutBatch out = batch_;
  out.obs.conservativeResize(Eigen::NoChange, count_);
  out.raw_action.conservativeResize(Eigen::NoChange, count_);
  out.old_mean.conservativeResize(Eigen::NoChange, count_);
  out.log_prob.conservativeResize(count_);
  out.reward.conservativeResize(count_);
  out.value.conservativeResize(count_);
  out.next_value.conservativeResize(count_);
  out.segment_end.resize(count_);
  count_ = 0;
  return out;
}

void compute_gae(RolloutBatch& batch, double gamma, double lambda) {
  const Eigen::Index n = batch.size();
  if (batch.value.size() != n || batch.next_value.size() != n ||
      batch.segment_end.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("rollout batch fields have inconsistent lengths");
  batch.advantage.resize(n);
  double running = 0.0;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const double delta = batch.reward(t) + gamma * batch.next_value(t) - batch.value(t);
    const bool end = batch.segment_end[static_cast<std::size_t>(t)] || t == n - 1;
    running = delta + (end ? 0.0 : gamma * lambda * running);
    batch.advantage(t) = running;
  }
  batch.ret = batch.advantage + batch.value;
}

void normalize_advantages(RolloutBatch& batch) {
  const Eigen::Index n = batch.advantage.size();
  if (n == 0) return;
  const double mean = batch.advantage.mean();
  batch.advantage.array() -= mean;
  const double stddev = std::sqrt(batch.advantage.squaredNorm() / static_cast<double>(n));
  if (stddev > 1e-8) batch.advantage /= stddev;
}

RolloutBatch select(const RolloutBatch& b, const std::vector<Eigen::Index>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  RolloutBatch out;
  out.obs.resize(b.obs.rows(), n);
  out.raw_action.resize(b.raw_action.rows(), n);
  out.old_mean.resize(b.old_mean.rows(), n);
  out.old_log_std = b.old_log_std;
  out.log_prob.resize(n);
  out.reward.resize(n);
  out.value.resize(n);
  out.next_value.resize(n);
  out.segment_end.resize(idx.size());
  const bool has_adv = b.advantage.size() == b.size();
  const bool has_ret = b.ret.size() == b.size();
  if (has_adv) out.advantage.resize(n);
  if (has_ret) out.ret.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = idx[static_cast<std::size_t>(k)];
    out.obs.col(k) = b.obs.col(i);
    out.raw_action.col(k) = b.raw_action.col(i);
    out.old_mean.col(k) = b.old_mean.col(i);
    out.log_prob(k) = b.log_prob(i);
    out.reward(k) = b.reward(i);
    out.value(k) = b.value(i);
    out.next_value(k) = b.next_value(i);
    out.segment_end[static_cast<std::size_t>(k)] = b.segment_end[static_cast<std::size_t>(i)];
    if (has_adv) out.advantage(k) = b.advantage(i);
    if (has_ret) out.ret(k) = b.ret(i);
  }
  return out;
}

}  // namespace rdrl::agents
