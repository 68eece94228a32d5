// Deterministic random streams. All draws go through hand-rolled
// distributions over mt19937_64 so output is identical across platforms
// (the standard pins the engine but not <random> distributions).
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace terra {

uint64_t fnv1a64(std::string_view text);

// SplitMix64-style mixer used to derive named substream seeds.
uint64_t mix64(uint64_t x);

// Child seed for a named stream, e.g. derive_seed(seed, "world") or
// derive_seed(seed, "policy", agent_hash, t).
uint64_t derive_seed(uint64_t root, std::string_view stream, uint64_t a = 0,
                     uint64_t b = 0);

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0,1) with 53 bits.
  double next_double() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform index in [0,n); n > 0.
  size_t index(size_t n);

  // Inclusive integer range.
  int64_t uniform_int(int64_t lo, int64_t hi);

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Box-Muller; both uniforms drawn every call, second value discarded,
  // so the stream position does not depend on call history.
  double normal(double mean, double sigma);

  // Knuth's method; fine for the small rates used here.
  int poisson(double lambda);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace terra
