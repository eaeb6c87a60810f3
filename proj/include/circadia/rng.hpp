#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace circadia {

// Deterministic splitmix64 stream. Distribution code is self-contained so
// that seeded outputs are byte-stable across standard library versions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1].
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  // Standard normal via Box-Muller (one value per pair of uniforms).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Knuth's product method for small means, normal approximation above.
  std::int64_t poisson(double lambda) {
    if (lambda <= 0) return 0;
    if (lambda > 64) {
      double v = std::round(normal(lambda, std::sqrt(lambda)));
      return v < 0 ? 0 : static_cast<std::int64_t>(v);
    }
    const double limit = std::exp(-lambda);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  SplitMix64 s(h);
  return s.next();
}
}  // namespace detail

// Key hashing so every (participant, day, stream) gets an independent stream
// regardless of generation order.
inline std::uint64_t rng_key(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = detail::mix64(seed, 0x8badf00d5eed5eedull);
  for (char c : tag) h = detail::mix64(h, static_cast<unsigned char>(c));
  return h;
}

template <typename... Ids>
std::uint64_t rng_key(std::uint64_t seed, std::string_view tag, Ids... ids) {
  std::uint64_t h = rng_key(seed, tag);
  ((h = detail::mix64(h, static_cast<std::uint64_t>(ids))), ...);
  return h;
}

template <typename... Ids>
SplitMix64 keyed_rng(std::uint64_t seed, std::string_view tag, Ids... ids) {
  return SplitMix64(rng_key(seed, tag, ids...));
}

}  // namespace circadia
