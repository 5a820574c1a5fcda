#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace cvs {

/// Deterministic random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Distributions are implemented here rather than with <random>
/// distribution objects (those are implementation-defined), so a given seed
/// yields the same draws on every platform and standard library.
///
/// Every draw consumes exactly one 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for run `run_index` of an experiment seeded with
  /// `base_seed`. Adding runs never perturbs the streams of earlier runs.
  static Rng for_run(std::uint64_t base_seed, std::uint64_t run_index);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform integer in [0, n). `n` must be positive.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Seed for run `run_index`: SplitMix64 applied to the pair.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t run_index) noexcept;

}  // namespace cvs
