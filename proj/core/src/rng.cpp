#include "mlsa/rng.hpp"

#include <limits>

#include "mlsa/errors.hpp"

namespace mlsa {

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw ValidationError("Rng::index needs n > 0");
  const std::uint64_t range = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return static_cast<std::size_t>(v % range);
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream ^ 0x6a09e667f3bcc908ULL));
}

}  // namespace mlsa
