#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mlsa {

// Seeding contract: every stochastic routine owns one of these, seeded
// from an explicit 64-bit value, and draws only through the methods below
// so trajectories are reproducible bit for bit across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits; one engine draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // -1 or +1 with probability 1/2 each; one engine draw.
  int direction() { return (engine_() >> 63) != 0 ? 1 : -1; }

  // Uniform on {0, ..., n-1}, by rejection.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

// Decorrelated child seed for stream `stream` of `base` (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace mlsa
