#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "cvs/environment.hpp"
#include "cvs/rng.hpp"
#include "cvs/types.hpp"

namespace cvs {

/// Grid geometry for the Shooter game. Rows are the field's width (the gun
/// and target columns), columns its length. The gun sits in column 0, the
/// target in column n_cols - 1.
struct ShooterConfig {
  int n_rows = 10;
  int n_cols = 20;
  int obstacle_col = 7;
  std::vector<int> obstacle_rows{4, 5, 6};
  /// Episodes still running after this many steps end with reward -1.
  int horizon = 200;

  /// Throws ValidationError.
  void validate() const;
  bool is_obstacle(int col, int row) const;
};

enum class ShooterAction : int { Noop = 0, ShootUp = 1, ShootHorizontal = 2, ShootDown = 3 };
inline constexpr int kShooterActionCount = 4;

struct Bullet {
  int col = 0;
  int row = 0;
  int vdir = 0;  // -1 (up), 0, +1 (down)
  friend bool operator==(const Bullet&, const Bullet&) = default;
};

struct ShooterState {
  int gun_row = 0;
  std::optional<Bullet> bullet;  // empty until fired
  int target_row = 0;
  int target_dir = 1;  // -1 or +1
  int steps_elapsed = 0;
  bool done = false;

  bool fired() const noexcept { return bullet.has_value(); }
  friend bool operator==(const ShooterState&, const ShooterState&) = default;
};

struct ShooterStep {
  ShooterState next;
  double reward = 0.0;
  bool terminal = false;
};

/// Fresh episode: uniform gun row, target row and target direction, in that
/// draw order (three draws).
ShooterState shooter_reset(const ShooterConfig& config, Rng& rng);

/// One tick. Order: fire (if holding the bullet and a shoot action is
/// chosen), move the target (reflecting at the walls), move the bullet one
/// row (reflecting) and one column, then resolve obstacle hit, last-column
/// hit/miss, and finally the horizon. Throws EpisodeError on a finished
/// state and std::out_of_range for actions outside [0, 4).
ShooterStep shooter_step(const ShooterConfig& config, const ShooterState& state,
                         ActionIndex action);

/// 1 before the shot, 0 afterwards.
double shooter_criticality(const ShooterState& state) noexcept;

/// Injective over (gun, bullet, target, direction, done); steps_elapsed is
/// not part of the key. Supports n_rows, n_cols <= 255.
StateKey encode(const ShooterState& state) noexcept;

/// Inverse of encode; steps_elapsed decodes as 0.
ShooterState decode_shooter(StateKey key) noexcept;

class ShooterEnv final : public Environment {
 public:
  explicit ShooterEnv(ShooterConfig config = {});

  StateKey reset(Rng& rng) override;
  StepOutcome step(ActionIndex action) override;
  int action_count() const override;
  StateKey state() const override;

  const ShooterState& shooter_state() const noexcept { return state_; }
  const ShooterConfig& config() const noexcept { return config_; }

 private:
  ShooterConfig config_;
  ShooterState state_;
};

ShooterConfig parse_shooter_config(std::string_view json_text);

}  // namespace cvs
