#include "ergo/rng.hpp"

namespace ergo {
namespace {

constexpr std::uint64_t kIncrement = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngState RngState::substream(std::uint64_t seed, std::uint64_t index) {
  return RngState{mix(seed + kIncrement * (index + 1)) ^ mix(index)};
}

std::uint64_t next_u64(RngState& state) {
  state.counter += kIncrement;
  return mix(state.counter);
}

double next_unit(RngState& state) {
  return static_cast<double>(next_u64(state) >> 11) * 0x1.0p-53;
}

}  // namespace ergo
