#include "cvs/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cvs/errors.hpp"

namespace cvs {

void AgentConfig::validate() const {
  const auto check = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("agent config: ") + what);
  };
  check(alpha > 0.0 && alpha <= 1.0, "alpha must be in (0, 1]");
  check(gamma >= 0.0 && gamma <= 1.0, "gamma must be in [0, 1]");
  check(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must be in [0, 1]");
  check(lambda >= 0.0 && lambda <= 1.0, "lambda must be in [0, 1]");
}

std::vector<ActionIndex> greedy_actions(const QTable& table, StateKey state, int n_actions) {
  if (n_actions < 1) {
    throw std::invalid_argument("terminal state has no actions");
  }
  const double best = table.max_value(state, n_actions);
  std::vector<ActionIndex> out;
  for (ActionIndex a = 0; a < n_actions; ++a) {
    if (table.value(state, a) == best) out.push_back(a);
  }
  return out;
}

ActionIndex epsilon_greedy(const QTable& table, StateKey state, int n_actions, double epsilon,
                           Rng& rng) {
  if (n_actions < 1) {
    throw std::invalid_argument("terminal state has no actions");
  }
  const double coin = rng.uniform();
  const double pick = rng.uniform();

  if (coin < epsilon) {
    return static_cast<ActionIndex>(
        std::min<double>(std::floor(pick * n_actions), n_actions - 1));
  }

  // Argmax set without allocating: count ties, then select the k-th one.
  const double best = table.max_value(state, n_actions);
  int ties = 0;
  for (ActionIndex a = 0; a < n_actions; ++a) {
    if (table.value(state, a) == best) ++ties;
  }
  int k = std::min(static_cast<int>(std::floor(pick * ties)), ties - 1);
  for (ActionIndex a = 0; a < n_actions; ++a) {
    if (table.value(state, a) == best && k-- == 0) return a;
  }
  return 0;  // unreachable: ties >= 1
}

}  // namespace cvs
