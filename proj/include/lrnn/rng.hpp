#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lrnn::rng {

// splitmix64 finalizer; used to derive independent stream seeds so that
// related components (layers, subdomains, sampling regions) never share a
// stream and adding one component does not perturb the others.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p));
  return h;
}

// Top-level stream domains.
inline constexpr std::uint64_t kNetworks = 1;
inline constexpr std::uint64_t kSampling = 2;
inline constexpr std::uint64_t kMonteCarlo = 3;

// Uniform doubles from mt19937_64 raw output. The engine's bit stream is
// specified by the standard, and the [0,1) mapping below avoids
// distribution-object portability issues.
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t stream_seed) : eng_(stream_seed) {}

  double next_unit() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double next_in(double a, double b) { return a + (b - a) * next_unit(); }
  double next_symmetric(double r) { return (2.0 * next_unit() - 1.0) * r; }
  std::uint64_t next_raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace lrnn::rng
