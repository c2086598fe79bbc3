#include "shadowtrack/rng.hpp"

namespace shadowtrack {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

unsigned Rng::poisson(double mean) {
  if (!(mean > 0.0)) {
    return 0;
  }
  return std::poisson_distribution<unsigned>(mean)(engine_);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ (stream * 0xd1b54a32d192ed03ULL));
  h = splitmix64(h ^ (index * 0xaf251af3b0f025b5ULL));
  return h;
}

}  // namespace shadowtrack
