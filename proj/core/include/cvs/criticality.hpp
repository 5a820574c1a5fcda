#pragma once

#include <memory>
#include <span>
#include <unordered_map>

#include "cvs/qtable.hpp"
#include "cvs/road_tree.hpp"
#include "cvs/shooter.hpp"
#include "cvs/types.hpp"

namespace cvs {

/// Maps a state to a criticality in [0, 1]: how much the action chosen in
/// that state matters for the return.
///
/// Learned providers additionally receive `observe` once per visited state,
/// before `criticality` is queried for it; their output is a deterministic
/// function of that observation history. Stateful providers are single-owner.
class CriticalityProvider {
 public:
  virtual ~CriticalityProvider() = default;

  virtual double criticality(StateKey state) const = 0;

  virtual void observe(const QTable& /*table*/, StateKey /*state*/, int /*n_actions*/) {}
};

class ConstantCriticality final : public CriticalityProvider {
 public:
  /// Throws ValidationError unless c is in [0, 1].
  explicit ConstantCriticality(double c);
  double criticality(StateKey) const override { return c_; }

 private:
  double c_;
};

/// Road-Tree junction measure over encoded tree states.
class JunctionCriticality final : public CriticalityProvider {
 public:
  explicit JunctionCriticality(std::shared_ptr<const RoadTree> tree);
  double criticality(StateKey state) const override;

 private:
  std::shared_ptr<const RoadTree> tree_;
};

/// Shooter measure over encoded shooter states.
class ShooterCriticality final : public CriticalityProvider {
 public:
  double criticality(StateKey state) const override;
};

/// Criticality learned from the spread of Q(s, .): spread(s) divided by the
/// largest spread seen so far. The spread is recorded at each observation of
/// s; never-observed states and an all-zero history give 0.
class SpreadCriticality : public CriticalityProvider {
 public:
  double criticality(StateKey state) const override;
  void observe(const QTable& table, StateKey state, int n_actions) override;

  double running_max() const noexcept { return running_max_; }

 protected:
  virtual double spread(std::span<const double> q_values) const = 0;

 private:
  double running_max_ = 0.0;
  std::unordered_map<StateKey, double> last_spread_;
  std::vector<double> scratch_;
};

/// var_a Q(s, a) (population variance over the action set) normalised by
/// the maximum variance encountered.
class LearnedVarianceCriticality final : public SpreadCriticality {
 protected:
  double spread(std::span<const double> q_values) const override;
};

/// max_a Q(s, a) - min_a Q(s, a) normalised by the maximum range encountered.
class ImportanceCriticality final : public SpreadCriticality {
 protected:
  double spread(std::span<const double> q_values) const override;
};

/// Population variance; 0 for fewer than two values.
double population_variance(std::span<const double> values) noexcept;

/// max - min; 0 for an empty span.
double value_range(std::span<const double> values) noexcept;

/// 1 - (dist - 1) / (field_length - 1) while the ball approaches, else 0.
/// Throws ValidationError unless field_length >= 2 and 1 <= dist <= field_length.
double linear_distance_criticality(int dist, int field_length, bool moving_toward);

}  // namespace cvs
