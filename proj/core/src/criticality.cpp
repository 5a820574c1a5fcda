#include "cvs/criticality.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "cvs/errors.hpp"

namespace cvs {

ConstantCriticality::ConstantCriticality(double c) : c_(c) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw ValidationError("constant criticality must be in [0, 1], got " + std::to_string(c));
  }
}

JunctionCriticality::JunctionCriticality(std::shared_ptr<const RoadTree> tree)
    : tree_(std::move(tree)) {}

double JunctionCriticality::criticality(StateKey state) const {
  return junction_criticality(tree_->decode(state));
}

double ShooterCriticality::criticality(StateKey state) const {
  return shooter_criticality(decode_shooter(state));
}

double SpreadCriticality::criticality(StateKey state) const {
  if (running_max_ <= 0.0) return 0.0;
  const auto it = last_spread_.find(state);
  if (it == last_spread_.end()) return 0.0;
  return std::clamp(it->second / running_max_, 0.0, 1.0);
}

void SpreadCriticality::observe(const QTable& table, StateKey state, int n_actions) {
  scratch_.clear();
  for (ActionIndex a = 0; a < n_actions; ++a) scratch_.push_back(table.value(state, a));
  const double v = spread(scratch_);
  running_max_ = std::max(running_max_, v);
  last_spread_[state] = v;
}

double LearnedVarianceCriticality::spread(std::span<const double> q_values) const {
  return population_variance(q_values);
}

double ImportanceCriticality::spread(std::span<const double> q_values) const {
  return value_range(q_values);
}

double population_variance(std::span<const double> values) noexcept {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size());
}

double value_range(std::span<const double> values) noexcept {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

double linear_distance_criticality(int dist, int field_length, bool moving_toward) {
  if (field_length < 2) {
    throw ValidationError("field_length must be >= 2, got " + std::to_string(field_length));
  }
  if (dist < 1 || dist > field_length) {
    throw ValidationError("dist must be in [1, " + std::to_string(field_length) + "], got " +
                          std::to_string(dist));
  }
  if (!moving_toward) return 0.0;
  const double c = 1.0 - static_cast<double>(dist - 1) / static_cast<double>(field_length - 1);
  return std::clamp(c, 0.0, 1.0);
}

}  // namespace cvs
