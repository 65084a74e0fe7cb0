#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pap {

// Deterministic RNG used everywhere randomness is needed. All draws go
// through the helpers below so results do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [lo, hi], inclusive. Requires lo <= hi.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<int64_t>(next_u64());  // full range
    return lo + static_cast<int64_t>(next_u64() % span);
  }

  size_t index(size_t n) {
    if (n == 0) throw std::invalid_argument("index: empty range");
    return static_cast<size_t>(next_u64() % n);
  }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[index(xs.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (size_t i = xs.size(); i > 1; --i) {
      size_t j = index(i);
      std::swap(xs[i - 1], xs[j]);
    }
  }

  // Derives an independent stream; used to give sub-components their own
  // seeds without coupling draw order.
  uint64_t fork() { return next_u64() ^ 0x9e3779b97f4a7c15ULL; }

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a. Stable across platforms; used for style ids, config
// hashes and feature hashing.
inline uint64_t fnv1a(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::vector<std::string> split_ws(const std::string& s);
std::string lower(std::string s);
std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace pap
