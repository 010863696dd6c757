#pragma once

#include <array>
#include <cstdint>

namespace spadfit {

/// Philox 4x32 keyed counter permutation with 10 rounds. Counter-based, so
/// any block of the stream can be produced without generating its
/// predecessors; that is what makes per-cycle substreams cheap.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);
};

/// Independent substream domains. Consumers of the same seed that draw for
/// unrelated purposes must not share a counter prefix.
enum class StreamDomain : std::uint32_t {
  arrivals = 0,
  mixture_sampling = 1,
  restarts = 2,
};

/// A deterministic random stream addressed by (seed, domain, replication,
/// cycle). Streams with distinct addresses are statistically independent and
/// may be created in any order, which keeps multi-threaded simulation
/// bit-reproducible.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamDomain domain,
               std::uint32_t replication = 0, std::uint32_t cycle = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform();
  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_positive();
  double uniform(double lo, double hi);
  /// Box-Muller transform; consumes exactly two uniforms per call.
  double normal(double mean, double stddev);
  /// Knuth multiplication method; intended for small means (< ~30).
  std::uint64_t poisson(double mean);

 private:
  void refill();

  Philox4x32::Key key_;
  std::uint32_t cycle_;
  std::uint32_t lane_;  // domain tag | replication
  std::uint64_t block_index_ = 0;
  Philox4x32::Counter buffer_{};
  int buffer_pos_ = 4;
};

}  // namespace spadfit
