#pragma once

#include "cvs/rng.hpp"
#include "cvs/types.hpp"

namespace cvs {

/// Episodic environment cursor. One instance per run; not thread-safe.
class Environment {
 public:
  virtual ~Environment() = default;

  /// Start a new episode and return the initial state.
  virtual StateKey reset(Rng& rng) = 0;

  /// Throws EpisodeError when the current state is terminal and
  /// std::out_of_range when `action` is not valid in the current state.
  virtual StepOutcome step(ActionIndex action) = 0;

  /// Actions available in the current state; 0 once terminal.
  virtual int action_count() const = 0;

  virtual StateKey state() const = 0;
};

}  // namespace cvs
