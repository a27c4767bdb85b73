#pragma once

#include <cstdint>

namespace ergo {

/// SplitMix64: a counter-based generator with 64-bit state.
///
/// Each draw adds the increment 0x9E3779B97F4A7C15 to the counter and returns
/// the counter passed through the finalizer
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z =  z ^ (z >> 31)
/// Uniform doubles take the top 53 bits: (z >> 11) * 2^-53.
///
/// The state is a plain value. Functions that consume randomness take it by
/// reference and leave it advanced.
struct RngState {
  std::uint64_t counter = 0;

  static RngState from_seed(std::uint64_t seed) { return RngState{seed}; }

  /// An independent stream derived from (seed, index), for parallel work.
  static RngState substream(std::uint64_t seed, std::uint64_t index);

  friend bool operator==(const RngState&, const RngState&) = default;
};

std::uint64_t next_u64(RngState& state);

/// Uniform on [0, 1).
double next_unit(RngState& state);

}  // namespace ergo
