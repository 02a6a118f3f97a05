#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace dsp {

// SplitMix64 step; used for seed derivation and stateless per-item hashing.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t value) {
  return splitmix64(seed ^ splitmix64(value + 0x165667b19e3779f9ull));
}

// Maps a 64-bit hash to [0,1). Stateless counterpart of Rng::next_unit.
inline double unit_from_hash(uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// mt19937_64 is specified by the standard, so sequences are portable.
// The standard distributions are not; the uniform helpers here are ours.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(seed) {}

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return engine_(); }

  double next_unit() { return unit_from_hash(next_u64()); }

  // Uniform in [0, n). Modulo bias is irrelevant at the scales used here.
  uint64_t next_below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be positive");
    return next_u64() % n;
  }

  Rng fork(uint64_t stream_id) const { return Rng(hash_combine(seed_, stream_id)); }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

// Rng wrapper that records draws and refuses them while disarmed. Used to
// certify that streaming phases consume no randomness.
class GuardedRng {
 public:
  explicit GuardedRng(uint64_t seed) : rng_(seed) {}

  void arm() { armed_ = true; }
  void disarm() { armed_ = false; }
  bool armed() const { return armed_; }

  uint64_t draws() const { return draws_; }

  uint64_t next_u64() {
    if (!armed_) throw std::logic_error("GuardedRng: draw while disarmed");
    ++draws_;
    return rng_.next_u64();
  }

  double next_unit() {
    if (!armed_) throw std::logic_error("GuardedRng: draw while disarmed");
    ++draws_;
    return rng_.next_unit();
  }

  Rng fork(uint64_t stream_id) {
    if (!armed_) throw std::logic_error("GuardedRng: fork while disarmed");
    return rng_.fork(stream_id);
  }

 private:
  Rng rng_;
  bool armed_ = false;
  uint64_t draws_ = 0;
};

}  // namespace dsp
