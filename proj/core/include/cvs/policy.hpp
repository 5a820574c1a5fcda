#pragma once

#include <vector>

#include "cvs/qtable.hpp"
#include "cvs/rng.hpp"
#include "cvs/types.hpp"

namespace cvs {

/// All argmax actions over [0, n_actions), ascending. Throws std::invalid_argument
/// when n_actions < 1 ("terminal state has no actions").
std::vector<ActionIndex> greedy_actions(const QTable& table, StateKey state, int n_actions);

/// Epsilon-greedy selection with uniform tie-breaking among greedy actions.
///
/// Always consumes exactly two draws from `rng`: the exploration coin, then
/// the action pick (uniform over all actions when exploring, over the argmax
/// set otherwise). Agents sharing a seed therefore stay in lock-step.
ActionIndex epsilon_greedy(const QTable& table, StateKey state, int n_actions, double epsilon,
                           Rng& rng);

}  // namespace cvs
