#pragma once

#include <Eigen/Core>

#include "rdrl/common/random.hpp"

namespace rdrl::agents {

struct ReplayBatch {
  Eigen::MatrixXd obs;       // obs_dim x B
  Eigen::MatrixXd action;    // action_dim x B
  Eigen::RowVectorXd reward;
  Eigen::MatrixXd next_obs;
  Eigen::RowVectorXd done;   // 1 for terminal transitions
};

/// Fixed-capacity ring buffer; the oldest transition is overwritten when full.
class ReplayBuffer {
 public:
  ReplayBuffer(int capacity, int obs_dim, int action_dim);

  void add(const Eigen::VectorXd& obs, const Eigen::VectorXd& action, double reward,
           const Eigen::VectorXd& next_obs, bool done);
  int size() const { return size_; }
  int capacity() const { return capacity_; }

  /// Uniform draw of `batch` distinct transitions.
  ReplayBatch sample(int batch, Rng& rng) const;

 private:
  int capacity_;
  int size_ = 0;
  int next_ = 0;
  Eigen::MatrixXd obs_, action_, next_obs_;
  Eigen::RowVectorXd reward_, done_;
};

}  // namespace rdrl::agents
