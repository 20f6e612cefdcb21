#pragma once

#include <Eigen/Core>

#include <vector>

namespace rdrl::agents {

/// On-policy samples, one column (or entry) per decision step.
struct RolloutBatch {
  Eigen::MatrixXd obs;        // obs_dim x N
  Eigen::MatrixXd raw_action; // action_dim x N, pre-squash Gaussian sample
  Eigen::MatrixXd old_mean;   // action_dim x N, policy mean at collection time
  Eigen::VectorXd old_log_std;
  Eigen::RowVectorXd log_prob;  // Gaussian log density of raw_action under the collecting policy
  Eigen::RowVectorXd reward;
  Eigen::RowVectorXd value;
  Eigen::RowVectorXd next_value;  // V(s') for bootstrapping; 0 after a terminal state
  std::vector<bool> segment_end;  // episode end or rollout cut after this step
  Eigen::RowVectorXd advantage;
  Eigen::RowVectorXd ret;

  Eigen::Index size() const { return reward.size(); }
  void validate() const;
};

/// Incrementally filled rollout storage.
class RolloutBuffer {
 public:
  RolloutBuffer(int obs_dim, int action_dim, int capacity);

  void add(const Eigen::VectorXd& obs, const Eigen::VectorXd& raw_action,
           const Eigen::VectorXd& mean, double log_prob, double reward, double value,
           double next_value, bool segment_end);
  bool full() const { return count_ == capacity_; }
  int size() const { return count_; }
  /// Marks the newest step as a segment end with the given bootstrap value.
  void cut(double next_value);
  RolloutBatch take();

 private:
  int capacity_;
  int count_ = 0;
  RolloutBatch batch_;
};

/// Generalized advantage estimation; fills advantage and ret (= advantage + value).
void compute_gae(RolloutBatch& batch, double gamma, double lambda);

/// Zero mean, unit variance (no-op scaling when the spread is ~0).
void normalize_advantages(RolloutBatch& batch);

/// Subset of columns, in the given order.
RolloutBatch select(const RolloutBatch& batch, const std::vector<Eigen::Index>& idx);

}  // namespace rdrl::agents
