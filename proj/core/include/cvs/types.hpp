#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace cvs {

/// Opaque encoding of a full environment state. Each environment owns its encoding.
struct StateKey {
  std::uint64_t value = 0;

  friend constexpr bool operator==(StateKey, StateKey) = default;
  friend constexpr auto operator<=>(StateKey, StateKey) = default;
};

/// Index into the action set of a particular state, in [0, action_count).
using ActionIndex = int;

struct StateAction {
  StateKey state;
  ActionIndex action = 0;

  friend constexpr bool operator==(StateAction, StateAction) = default;
};

struct StepOutcome {
  StateKey next_state;
  double reward = 0.0;
  bool terminal = false;
};

/// Learning hyper-parameters shared by all agents. Defaults are the tabular
/// settings: alpha = epsilon = 0.1, undiscounted, lambda = 0.9 for Q(lambda).
struct AgentConfig {
  double alpha = 0.1;
  double gamma = 1.0;
  double epsilon = 0.1;
  double lambda = 0.9;

  /// Throws ValidationError naming the first out-of-range field.
  void validate() const;
};

/// 64-bit finalizer from SplitMix64; used for hashing and seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace cvs

template <>
struct std::hash<cvs::StateKey> {
  std::size_t operator()(cvs::StateKey key) const noexcept {
    return static_cast<std::size_t>(cvs::mix64(key.value));
  }
};

template <>
struct std::hash<cvs::StateAction> {
  std::size_t operator()(cvs::StateAction sa) const noexcept {
    return static_cast<std::size_t>(cvs::mix64(
        sa.state.value ^ (static_cast<std::uint64_t>(sa.action) * 0x9e3779b97f4a7c15ULL)));
  }
};
