#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace threshold_lab {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., Random123).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Counter-based generator. The 64-bit seed is the Philox key; the 128-bit
/// counter is (draw index, stream id), so every (seed, stream) pair names an
/// independent, randomly addressable sequence.
///
/// Stream rule used across the library: Monte Carlo trial t draws from stream
/// t; round r of fragmentation trial t draws from stream process_stream(t, r).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // 53-bit uniform in [0, 1).
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform01() < p; }
  // Uniform integer in [0, bound), bound > 0. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int used_ = 2;
};

inline constexpr std::uint64_t process_stream(std::uint64_t trial, int round) {
  return (trial << 6) | static_cast<std::uint64_t>(round & 63);
}

}  // namespace threshold_lab
