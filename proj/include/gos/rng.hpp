#pragma once

#include <cstdint>
#include <random>

namespace gos {

// Seeded RNG stream. A (seed, stream id) pair reproduces the identical
// sample sequence; distinct stream ids give independent streams, so e.g.
// the channel draws never perturb the dynamics noise. The double mappings
// are explicit (not <random> distributions) so sequences are bit-stable.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64() { return engine_(); }

  // uniform double in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // unbiased integer in [0, bound)
  std::uint64_t uniform_int(std::uint64_t bound);

  // standard normal via the Marsaglia polar method
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
};

// SplitMix64 mix, used for stream and replicate seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for the k-th replicate of a multi-seed run.
std::uint64_t derive_replicate_seed(std::uint64_t master, std::uint64_t k);

}  // namespace gos
