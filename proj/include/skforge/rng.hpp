#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace skforge {

// mt19937_64 output is pinned by the standard, so streams are reproducible
// across platforms. Distributions are not; every draw below is built from
// raw engine output only.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n == 0 returns 0.
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) return 0;
    // Rejection sampling keeps the draw unbiased without platform-varying
    // distribution internals.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(bounded(n)); }

  // Uniform in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[bounded(i)]);
    }
  }

  // First k elements of a shuffled copy; order is part of the draw.
  template <typename T>
  std::vector<T> sample(const std::vector<T>& items, std::size_t k) {
    std::vector<T> pool = items;
    k = std::min(k, pool.size());
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + bounded(pool.size() - i)]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

// FNV-1a over the seed bytes and a string tag. std::hash is not stable
// across implementations; per-database seeding must be.
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 1469598103934665603ull;
  auto eat = [&h](unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  for (int i = 0; i < 8; ++i) eat(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : tag) eat(static_cast<unsigned char>(c));
  return h;
}

}  // namespace skforge
