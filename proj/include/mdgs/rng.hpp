#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mdgs {

/// Seed hierarchy helpers.
///
/// Every stochastic quantity in the library is drawn from a stream whose seed
/// is derived from (parent seed, purpose, index), so results never depend on
/// the order in which work is scheduled.
namespace seeding {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t derive(std::uint64_t parent, std::string_view purpose,
                               std::uint64_t index = 0) {
  return splitmix64(splitmix64(parent ^ fnv1a(purpose)) + splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Counter-based uniform in [0, 1): one value per (stream, index) key.
constexpr double keyed_uniform(std::uint64_t stream, std::uint64_t index) {
  return static_cast<double>(splitmix64(stream ^ splitmix64(index)) >> 11) * 0x1.0p-53;
}

}  // namespace seeding

/// Sequential stream: std::mt19937_64 with portable uniform conversions.
///
/// The std:: distributions are implementation-defined, so all samplers in the
/// library go through `uniform01` / `below` to keep outputs bit-identical
/// across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(engine_()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mdgs
