#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace inspectfdi {

/// Deterministic random stream.
///
/// mt19937_64 is fully specified by the standard, but the distribution
/// adaptors are not; uniform and gaussian conversions are done explicitly
/// here so a seed reproduces the same sequence on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * kInv53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; draws two uniforms every other call.
  double gaussian();

 private:
  static constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53

  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Stable substream seed from a base seed and salts (splitmix64 mixing).
/// Used to give each (agent, fault kind) its own stream so injecting a
/// fault into one agent cannot shift another agent's noise sequence.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> salts);

}  // namespace inspectfdi
