#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace sdikit {

// Deterministic RNG used everywhere seeds appear. splitmix64 core, so the
// same seed gives the same stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Derive an independent stream from a seed plus a string tag (stage name,
  // example id, ...). Avoids accidental stream sharing between pipeline stages.
  static Rng derive(std::uint64_t seed, const std::string& tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : tag) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return Rng(seed ^ h);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  // Standard normal via Box-Muller; bit-deterministic given IEEE doubles.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Fisher-Yates, deterministic.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      const std::size_t j = uniform_index(i + 1);
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a over a sequence of strings; used to fingerprint prompt-case order.
inline std::uint64_t fnv1a_sequence(const std::vector<std::string>& items) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& s : items) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;  // separator so {"ab","c"} != {"a","bc"}
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace sdikit
