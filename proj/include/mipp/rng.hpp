#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mipp {

/// Identifies one reproducible random stream: the stream for path i is a
/// pure function of (master_seed, i).
struct StreamSeed {
  std::uint64_t master_seed = 42;
  std::uint64_t stream_id = 0;
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// Counter-based stream. The key is the master seed, the upper half of the
/// counter is the stream id and the lower half counts blocks, so streams
/// never overlap and can be created in any order on any thread.
///
/// All variate transforms are implemented here rather than taken from
/// <random>, whose distributions are implementation-defined.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  explicit CounterStream(StreamSeed seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double exponential(double rate);
  double normal();
  std::uint64_t poisson(double mean);

  std::uint64_t blocks_consumed() const { return block_; }

 private:
  void refill();

  PhiloxKey key_{};
  std::uint32_t stream_lo_ = 0;
  std::uint32_t stream_hi_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int next_ = 2;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace mipp
