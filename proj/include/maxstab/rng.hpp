#pragma once

#include <cstdint>

namespace maxstab {

/// Source of the three variate kinds the samplers consume. Virtual so tests
/// can script forced sequences.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual double uniform() = 0;      // [0, 1)
  virtual double normal() = 0;       // N(0, 1)
  virtual double exponential() = 0;  // Exp(1), inverse CDF -log(1-u)
};

/// Counter-based stream: SplitMix64 advanced from a state derived by hashing
/// (seed, stream_id). Identical (seed, stream_id) reproduce the same sequence
/// on every platform; distinct stream_ids give statistically independent
/// streams. Normals use the polar Box-Muller transform.
class RngStream final : public RandomSource {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  double uniform() override;
  double normal() override;
  double exponential() override;

  std::uint64_t next_u64();
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stable 64-bit mix used to derive nested stream ids (phase/algorithm/replicate).
std::uint64_t mix_u64(std::uint64_t a, std::uint64_t b);

/// A family of disjoint streams below one (seed, tag) prefix; replicate i of a
/// parallel loop draws from family.stream(i).
struct StreamFamily {
  std::uint64_t seed = 0;
  std::uint64_t tag = 0;

  RngStream stream(std::uint64_t replicate) const {
    return RngStream(seed, mix_u64(tag, replicate));
  }
  StreamFamily sub(std::uint64_t tag2) const { return {seed, mix_u64(tag, tag2)}; }
};

}  // namespace maxstab
