#include "cvs/rng.hpp"

#include <algorithm>

#include "cvs/types.hpp"

namespace cvs {

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t run_index) noexcept {
  return mix64(mix64(base_seed) ^ (run_index * 0xd1b54a32d192ed03ULL + 1));
}

Rng Rng::for_run(std::uint64_t base_seed, std::uint64_t run_index) {
  return Rng(derive_seed(base_seed, run_index));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return std::min(i, n - 1);
}

}  // namespace cvs
