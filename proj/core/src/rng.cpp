#include "mnlb/rng.hpp"

namespace mnlb {

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t draw, std::uint64_t rep,
                          StreamTag tag) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ draw);
  h = splitmix64(h ^ (rep * 0xd1b54a32d192ed03ULL));
  return splitmix64(h ^ static_cast<std::uint64_t>(tag));
}

}  // namespace mnlb
