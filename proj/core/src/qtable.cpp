#include "cvs/qtable.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cvs/errors.hpp"

namespace cvs {

QTable::QTable(double default_value) : default_value_(default_value) {
  if (!std::isfinite(default_value)) {
    throw ValidationError("QTable default value must be finite");
  }
}

double QTable::value(StateKey state, ActionIndex action) const {
  const auto it = values_.find(StateAction{state, action});
  return it == values_.end() ? default_value_ : it->second;
}

void QTable::set(StateKey state, ActionIndex action, double v) {
  if (!std::isfinite(v)) {
    throw ValidationError("non-finite Q-value for state " + std::to_string(state.value) +
                          ", action " + std::to_string(action));
  }
  values_[StateAction{state, action}] = v;
}

double QTable::max_value(StateKey state, int n_actions) const {
  double best = value(state, 0);
  for (ActionIndex a = 1; a < n_actions; ++a) {
    best = std::max(best, value(state, a));
  }
  return best;
}

bool QTable::identical_to(const QTable& other) const {
  if (std::bit_cast<std::uint64_t>(default_value_) !=
          std::bit_cast<std::uint64_t>(other.default_value_) ||
      values_.size() != other.values_.size()) {
    return false;
  }
  for (const auto& [key, v] : values_) {
    const auto it = other.values_.find(key);
    if (it == other.values_.end() ||
        std::bit_cast<std::uint64_t>(v) != std::bit_cast<std::uint64_t>(it->second)) {
      return false;
    }
  }
  return true;
}

void QTable::for_each(const std::function<void(StateKey, ActionIndex, double)>& fn) const {
  for (const auto& [key, v] : values_) {
    fn(key.state, key.action, v);
  }
}

}  // namespace cvs
