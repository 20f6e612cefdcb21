#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rdrl {

using Rng = std::mt19937_64;

// Derives an independent seed for a named substream ("env", "policy-init",
// "exploration", ...) from a single root seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream);
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index);

inline Rng make_rng(std::uint64_t root, std::string_view stream) {
  return Rng(derive_seed(root, stream));
}

}  // namespace rdrl
