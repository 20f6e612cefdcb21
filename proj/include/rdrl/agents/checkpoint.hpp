#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "rdrl/nn/mlp.hpp"

namespace rdrl::agents {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One stored parameter block: either a whole MLP (dims = layer sizes) or a
/// plain vector (dims = {n}).
struct TensorBlock {
  enum class Kind : std::uint8_t { kVector = 0, kMlp = 1 };
  std::string name;
  Kind kind = Kind::kVector;
  nn::Activation hidden = nn::Activation::kIdentity;
  nn::Activation output = nn::Activation::kIdentity;
  std::vector<std::uint32_t> dims;
  std::vector<double> values;
};

struct Checkpoint {
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<TensorBlock> blocks;

  const TensorBlock& block(const std::string& name) const;
  void add(const std::string& name, const nn::Mlp& net);
  void add(const std::string& name, const Eigen::VectorXd& v);
  nn::Mlp mlp(const std::string& name) const;
  Eigen::VectorXd vector(const std::string& name) const;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Byte layout (little-endian):
///   "RDRLCKPT" | u32 version | u64 n | n bytes of JSON metadata | u32 block count |
///   per block: u32 name length, name, u8 kind, u8 hidden activation,
///   u8 output activation, u32 ndims, ndims x u32, u64 count, count x f64.
void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rdrl::agents
