#pragma once

#include <cstddef>
#include <functional>
#include <unordered_map>

#include "cvs/types.hpp"

namespace cvs {

/// Tabular action-value function. Unseen (state, action) pairs read as the
/// default value; stored values are always finite.
class QTable {
 public:
  explicit QTable(double default_value = 0.0);

  double value(StateKey state, ActionIndex action) const;

  /// Throws ValidationError if `v` is not finite.
  void set(StateKey state, ActionIndex action, double v);

  /// max over a in [0, n_actions) of value(state, a); n_actions must be >= 1.
  double max_value(StateKey state, int n_actions) const;

  double default_value() const noexcept { return default_value_; }
  std::size_t size() const noexcept { return values_.size(); }
  void clear() { values_.clear(); }

  /// True iff both tables hold the same default and the same stored pairs
  /// with bit-identical values.
  bool identical_to(const QTable& other) const;

  void for_each(const std::function<void(StateKey, ActionIndex, double)>& fn) const;

 private:
  double default_value_;
  std::unordered_map<StateAction, double> values_;
};

}  // namespace cvs
