#include "rdrl/agents/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace rdrl::agents {
namespace {

constexpr std::array<char, 8> kMagic{'R', 'D', 'R', 'L', 'C', 'K', 'P', 'T'};
constexpr std::uint64_t kMaxMetadata = 1u << 24;
constexpr std::uint64_t kMaxValues = 1u << 28;

template <typename U>
void put_le(std::ostream& out, U value) {
  char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes, sizeof(U));
}

template <typename U>
U get_le(std::istream& in) {
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U)))
    throw CheckpointError("checkpoint truncated");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

std::string get_bytes(std::istream& in, std::uint64_t n) {
  std::string s(n, '\0');
  if (n && !in.read(s.data(), static_cast<std::streamsize>(n)))
    throw CheckpointError("checkpoint truncated");
  return s;
}

nn::Activation activation_from(std::uint8_t v) {
  if (v > static_cast<std::uint8_t>(nn::Activation::kTanh))
    throw CheckpointError("unknown activation code " + std::to_string(v));
  return static_cast<nn::Activation>(v);
}

}  // namespace

const TensorBlock& Checkpoint::block(const std::string& name) const {
  for (const auto& b : blocks)
    if (b.name == name) return b;
  throw CheckpointError("checkpoint has no block named '" + name + "'");
}

void Checkpoint::add(const std::string& name, const nn::Mlp& net) {
  TensorBlock b;
  b.name = name;
  b.kind = TensorBlock::Kind::kMlp;
  const auto& layers = net.layers();
  b.hidden = layers.size() > 1 ? layers.front().activation : nn::Activation::kIdentity;
  b.output = layers.back().activation;
  for (int s : net.sizes()) b.dims.push_back(static_cast<std::uint32_t>(s));
  const Eigen::VectorXd p = net.parameters();
  b.values.assign(p.data(), p.data() + p.size());
  blocks.push_back(std::move(b));
}

void Checkpoint::add(const std::string& name, const Eigen::VectorXd& v) {
  TensorBlock b;
  b.name = name;
  b.dims = {static_cast<std::uint32_t>(v.size())};
  b.values.assign(v.data(), v.data() + v.size());
  blocks.push_back(std::move(b));
}

nn::Mlp Checkpoint::mlp(const std::string& name) const {
  const auto& b = block(name);
  if (b.kind != TensorBlock::Kind::kMlp) throw CheckpointError("block '" + name + "' is not a network");
  std::vector<int> sizes(b.dims.begin(), b.dims.end());
  nn::Mlp net(sizes, b.hidden, b.output);
  if (static_cast<Eigen::Index>(b.values.size()) != net.parameter_count())
    throw CheckpointError("block '" + name + "' has the wrong parameter count");
  net.set_parameters(Eigen::Map<const Eigen::VectorXd>(b.values.data(), b.values.size()));
  return net;
}

Eigen::VectorXd Checkpoint::vector(const std::string& name) const {
  const auto& b = block(name);
  if (b.kind != TensorBlock::Kind::kVector) throw CheckpointError("block '" + name + "' is not a vector");
  return Eigen::Map<const Eigen::VectorXd>(b.values.data(), b.values.size());
}

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  const std::string meta = ckpt.metadata.dump();
  put_le<std::uint64_t>(out, meta.size());
  out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.blocks.size()));
  for (const auto& b : ckpt.blocks) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(b.name.size()));
    out.write(b.name.data(), static_cast<std::streamsize>(b.name.size()));
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(b.kind));
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(b.hidden));
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(b.output));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(b.dims.size()));
    for (auto d : b.dims) put_le<std::uint32_t>(out, d);
    put_le<std::uint64_t>(out, b.values.size());
    for (double v : b.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw CheckpointError("failed writing checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  const std::string magic = get_bytes(in, kMagic.size());
  if (std::memcmp(magic.data(), kMagic.data(), kMagic.size()) != 0)
    throw CheckpointError("not a checkpoint file (bad magic)");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ckpt;
  const auto meta_len = get_le<std::uint64_t>(in);
  if (meta_len > kMaxMetadata) throw CheckpointError("checkpoint metadata too large");
  try {
    ckpt.metadata = nlohmann::json::parse(get_bytes(in, meta_len));
  } catch (const nlohmann::json::parse_error& e) {
    throw CheckpointError(std::string("corrupt checkpoint metadata: ") + e.what());
  }
  const auto count = get_le<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < count; ++i) {
    TensorBlock b;
    b.name = get_bytes(in, get_le<std::uint32_t>(in));
    const auto kind = get_le<std::uint8_t>(in);
    if (kind > 1) throw CheckpointError("unknown block kind");
    b.kind = static_cast<TensorBlock::Kind>(kind);
    b.hidden = activation_from(get_le<std::uint8_t>(in));
    b.output = activation_from(get_le<std::uint8_t>(in));
    const auto ndims = get_le<std::uint32_t>(in);
    if (ndims > 64) throw CheckpointError("too many dimensions in block '" + b.name + "'");
    for (std::uint32_t d = 0; d < ndims; ++d) b.dims.push_back(get_le<std::uint32_t>(in));
    const auto n = get_le<std::uint64_t>(in);
    if (n > kMaxValues) throw CheckpointError("block '" + b.name + "' too large");
    b.values.resize(n);
    for (auto& v : b.values) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
    ckpt.blocks.push_back(std::move(b));
  }
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open '" + path.string() + "' for writing");
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  return read_checkpoint(in);
}

}  // namespace rdrl::agents
