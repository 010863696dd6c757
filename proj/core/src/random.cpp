#include "spadfit/random.hpp"

#include <cmath>
#include <stdexcept>

namespace spadfit {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline Philox4x32::Counter round_once(const Philox4x32::Counter& c,
                                      const Philox4x32::Key& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter counter, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    counter = round_once(counter, key);
  }
  return counter;
}

RandomStream::RandomStream(std::uint64_t seed, StreamDomain domain,
                           std::uint32_t replication, std::uint32_t cycle)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      cycle_(cycle),
      lane_((static_cast<std::uint32_t>(domain) << 28) | replication) {
  if (replication >= (1u << 28)) {
    throw std::out_of_range("RandomStream: replication index exceeds 2^28");
  }
}

void RandomStream::refill() {
  const Philox4x32::Counter counter = {
      static_cast<std::uint32_t>(block_index_),
      static_cast<std::uint32_t>(block_index_ >> 32), cycle_, lane_};
  buffer_ = Philox4x32::block(counter, key_);
  ++block_index_;
  buffer_pos_ = 0;
}

std::uint32_t RandomStream::next_u32() {
  if (buffer_pos_ >= 4) refill();
  return buffer_[buffer_pos_++];
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_positive() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RandomStream::normal(double mean, double stddev) {
  const double u1 = uniform_positive();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  constexpr double two_pi = 6.283185307179586476925286766559;
  return mean + stddev * radius * std::cos(two_pi * u2);
}

std::uint64_t RandomStream::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
  if (mean == 0.0) return 0;
  const double threshold = std::exp(-mean);
  std::uint64_t count = 0;
  double product = uniform_positive();
  while (product > threshold) {
    ++count;
    product *= uniform_positive();
  }
  return count;
}

}  // namespace spadfit
