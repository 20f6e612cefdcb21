#include "rdrl/agents/replay_buffer.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace rdrl::agents {

ReplayBuffer::ReplayBuffer(int capacity, int obs_dim, int action_dim)
    : capacity_(capacity), obs_(obs_dim, 0), action_(action_dim, 0), next_obs_(obs_dim, 0) {
  if (capacity <= 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::add(const Eigen::VectorXd& obs, const Eigen::VectorXd& action, double reward,
                       const Eigen::VectorXd& next_obs, bool done) {
  if (obs.size() != obs_.rows() || next_obs.size() != obs_.rows() || action.size() != action_.rows())
    throw std::invalid_argument("replay transition shape mismatch");
  if (obs_.cols() == 0) {  // storage is allocated on first use
    obs_.resize(Eigen::NoChange, capacity_);
    action_.resize(Eigen::NoChange, capacity_);
    next_obs_.resize(Eigen::NoChange, capacity_);
    reward_.resize(capacity_);
    done_.resize(capacity_);
  }
  obs_.col(next_) = obs;
  action_.col(next_) = action;
  next_obs_.col(next_) = next_obs;
  reward_(next_) = reward;
  done_(next_) = done ? 1.0 : 0.0;
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

ReplayBatch ReplayBuffer::sample(int batch, Rng& rng) const {
  if (batch <= 0 || batch > size_) throw std::invalid_argument("replay sample larger than buffer");
  // Floyd's algorithm: distinct indices in O(batch^2) without touching the whole range
  std::vector<int> picked;
  picked.reserve(batch);
  for (int j = size_ - batch; j < size_; ++j) {
    const int t = std::uniform_int_distribution<int>(0, j)(rng);
    if (std::find(picked.begin(), picked.end(), t) == picked.end())
      picked.push_back(t);
    else
      picked.push_back(j);
  }
  ReplayBatch out;
  out.obs.resize(obs_.rows(), batch);
  out.action.resize(action_.rows(), batch);
  out.next_obs.resize(obs_.rows(), batch);
  out.reward.resize(batch);
  out.done.resize(batch);
  for (int k = 0; k < batch; ++k) {
    const int i = picked[static_cast<std::size_t>(k)];
    out.obs.col(k) = obs_.col(i);
    out.action.col(k) = action_.col(i);
    out.next_obs.col(k) = next_obs_.col(i);
    out.reward(k) = reward_(i);
    out.done(k) = done_(i);
  }
  return out;
}

}  // namespace rdrl::agents
