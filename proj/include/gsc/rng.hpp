#pragma once

#include <cstdint>
#include <vector>

namespace gsc {

// Counter-based pseudo-random stream. Each draw hashes (key, counter), so a
// stream can be split into independent child streams that are reproducible
// under any thread schedule.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x93c467e37db0c7a4ULL)) {}

  // Child stream derived from this stream's key and a stream index.
  // Splitting does not advance the parent.
  Rng split(std::uint64_t stream) const {
    return Rng(mix(key_ ^ mix(stream + 0x8e9c1f2bface8d17ULL)), 0);
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; consumes two uniforms per call.
  double normal();

  // Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n);

  // Uniform label in {-1, +1}.
  int rademacher() { return (next_u64() & 1) ? +1 : -1; }

  // Bernoulli(p) as a label flip decision.
  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  Rng(std::uint64_t key, std::uint64_t counter) : key_(key), counter_(counter) {}

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += kGamma;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace gsc
