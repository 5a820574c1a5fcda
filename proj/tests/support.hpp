#pragma once

// Test-only environments, providers and oracles. Nothing here calls into the
// CVS update code; the oracles recompute returns from raw trajectories.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cvs/criticality.hpp"
#include "cvs/environment.hpp"
#include "cvs/qtable.hpp"
#include "cvs/types.hpp"

namespace cvs::testing {

/// Deterministic chain S_0 -> S_1 -> ... -> S_L (terminal). Every action in
/// S_i leads to S_{i+1}; the reward of that transition is rewards[i].
class ChainEnv final : public Environment {
 public:
  ChainEnv(std::vector<int> action_counts, std::vector<double> rewards)
      : actions_(std::move(action_counts)), rewards_(std::move(rewards)) {
    if (actions_.size() != rewards_.size()) throw std::invalid_argument("chain sizes differ");
  }

  static StateKey key(std::size_t i) { return StateKey{1000 + i}; }

  StateKey reset(Rng&) override {
    pos_ = 0;
    return key(0);
  }
  StepOutcome step(ActionIndex a) override {
    if (pos_ >= actions_.size()) throw std::logic_error("chain: terminal");
    if (a < 0 || a >= actions_[pos_]) throw std::out_of_range("chain: action");
    const double r = rewards_[pos_];
    ++pos_;
    return {key(pos_), r, pos_ == actions_.size()};
  }
  int action_count() const override {
    return pos_ < actions_.size() ? actions_[pos_] : 0;
  }
  StateKey state() const override { return key(pos_); }

  std::size_t length() const { return actions_.size(); }
  double reward(std::size_t i) const { return rewards_[i]; }
  int actions_at(std::size_t i) const { return actions_[i]; }

 private:
  std::vector<int> actions_;
  std::vector<double> rewards_;
  std::size_t pos_ = 0;
};

/// Criticality looked up from an explicit table; unknown states give `fallback`.
class TableCriticality final : public CriticalityProvider {
 public:
  explicit TableCriticality(std::unordered_map<StateKey, double> values, double fallback = 0.0)
      : values_(std::move(values)), fallback_(fallback) {}
  double criticality(StateKey s) const override {
    const auto it = values_.find(s);
    return it == values_.end() ? fallback_ : it->second;
  }

 private:
  std::unordered_map<StateKey, double> values_;
  double fallback_;
};

/// G_{t:t+n} = R_t + gamma R_{t+1} + ... + gamma^{n-1} R_{t+n-1} + gamma^n * bootstrap,
/// summed term by term with std::pow.
inline double brute_force_nstep(const std::vector<double>& rewards, std::size_t t, std::size_t n,
                                double gamma, double bootstrap) {
  double g = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g += std::pow(gamma, static_cast<double>(i)) * rewards[t + i];
  }
  return g + std::pow(gamma, static_cast<double>(n)) * bootstrap;
}

/// Smallest k >= 1 with c_1 + ... + c_k >= 1 for a constant criticality, or
/// `limit` if the sum never gets there within `limit` steps.
inline std::size_t steps_to_cumulative_one(double c, std::size_t limit) {
  double sum = 0.0;
  for (std::size_t k = 1; k <= limit; ++k) {
    sum += c;
    if (sum >= 1.0) return k;
  }
  return limit;
}

}  // namespace cvs::testing
