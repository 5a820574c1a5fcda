#include "cvs/shooter.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cvs/errors.hpp"

namespace cvs {
namespace {

int reflect(int pos, int& dir, int size) {
  if (size == 1) {
    dir = 0;
    return 0;
  }
  if (pos + dir < 0 || pos + dir >= size) dir = -dir;
  return pos + dir;
}

}  // namespace

void ShooterConfig::validate() const {
  const auto fail = [](const std::string& what) { throw ValidationError("shooter config: " + what); };
  if (n_rows < 2 || n_rows > 255) fail("n_rows must be in [2, 255]");
  if (n_cols < 3 || n_cols > 255) fail("n_cols must be in [3, 255]");
  if (obstacle_col <= 0 || obstacle_col >= n_cols - 1) {
    fail("obstacle_col must satisfy 0 < obstacle_col < n_cols - 1");
  }
  for (int r : obstacle_rows) {
    if (r < 0 || r >= n_rows) fail("obstacle row " + std::to_string(r) + " outside the field");
  }
  if (horizon < 1) fail("horizon must be >= 1");
}

bool ShooterConfig::is_obstacle(int col, int row) const {
  return col == obstacle_col &&
         std::find(obstacle_rows.begin(), obstacle_rows.end(), row) != obstacle_rows.end();
}

ShooterState shooter_reset(const ShooterConfig& config, Rng& rng) {
  ShooterState s;
  const auto rows = static_cast<std::size_t>(config.n_rows);
  s.gun_row = static_cast<int>(rng.index(rows));
  s.target_row = static_cast<int>(rng.index(rows));
  s.target_dir = rng.index(2) == 0 ? -1 : 1;
  return s;
}

ShooterStep shooter_step(const ShooterConfig& config, const ShooterState& state,
                         ActionIndex action) {
  if (state.done) throw EpisodeError("shooter: step from a terminal state");
  if (action < 0 || action >= kShooterActionCount) {
    throw std::out_of_range("shooter: action " + std::to_string(action) + " out of range");
  }

  ShooterState next = state;
  next.steps_elapsed = state.steps_elapsed + 1;

  if (!next.bullet && action != static_cast<int>(ShooterAction::Noop)) {
    next.bullet = Bullet{0, state.gun_row, action - 2};
  }

  next.target_row = reflect(next.target_row, next.target_dir, config.n_rows);

  if (next.bullet) {
    Bullet& b = *next.bullet;
    b.row = reflect(b.row, b.vdir, config.n_rows);
    b.col += 1;
    if (config.is_obstacle(b.col, b.row)) {
      next.done = true;
      return {next, -1.0, true};
    }
    if (b.col == config.n_cols - 1) {
      next.done = true;
      return {next, b.row == next.target_row ? 1.0 : -1.0, true};
    }
  }

  if (next.steps_elapsed >= config.horizon) {
    next.done = true;
    return {next, -1.0, true};
  }
  return {next, 0.0, false};
}

double shooter_criticality(const ShooterState& state) noexcept {
  return state.fired() ? 0.0 : 1.0;
}

// Byte layout, low to high: gun_row, target_row, bullet col, bullet row,
// then a flag byte: bit0 target_dir>0, bit1 fired, bits2-3 vdir+1, bit4 done.
StateKey encode(const ShooterState& s) noexcept {
  std::uint64_t v = static_cast<std::uint64_t>(s.gun_row & 0xff) |
                    (static_cast<std::uint64_t>(s.target_row & 0xff) << 8);
  std::uint64_t flags = s.target_dir > 0 ? 1u : 0u;
  if (s.bullet) {
    v |= static_cast<std::uint64_t>(s.bullet->col & 0xff) << 16;
    v |= static_cast<std::uint64_t>(s.bullet->row & 0xff) << 24;
    flags |= 2u;
    flags |= static_cast<std::uint64_t>(s.bullet->vdir + 1) << 2;
  }
  if (s.done) flags |= 16u;
  return StateKey{v | (flags << 32)};
}

ShooterState decode_shooter(StateKey key) noexcept {
  const std::uint64_t v = key.value;
  const std::uint64_t flags = v >> 32;
  ShooterState s;
  s.gun_row = static_cast<int>(v & 0xff);
  s.target_row = static_cast<int>((v >> 8) & 0xff);
  s.target_dir = (flags & 1u) ? 1 : -1;
  if (flags & 2u) {
    s.bullet = Bullet{static_cast<int>((v >> 16) & 0xff), static_cast<int>((v >> 24) & 0xff),
                      static_cast<int>((flags >> 2) & 3u) - 1};
  }
  s.done = (flags & 16u) != 0;
  return s;
}

ShooterEnv::ShooterEnv(ShooterConfig config) : config_(std::move(config)) {
  config_.validate();
}

StateKey ShooterEnv::reset(Rng& rng) {
  state_ = shooter_reset(config_, rng);
  return encode(state_);
}

StepOutcome ShooterEnv::step(ActionIndex action) {
  ShooterStep s = shooter_step(config_, state_, action);
  state_ = std::move(s.next);
  return StepOutcome{encode(state_), s.reward, s.terminal};
}

int ShooterEnv::action_count() const { return state_.done ? 0 : kShooterActionCount; }

StateKey ShooterEnv::state() const { return encode(state_); }

ShooterConfig parse_shooter_config(std::string_view json_text) {
  ShooterConfig c;
  try {
    const auto j = nlohmann::json::parse(json_text);
    c.n_rows = j.value("n_rows", c.n_rows);
    c.n_cols = j.value("n_cols", c.n_cols);
    c.obstacle_col = j.value("obstacle_col", c.obstacle_col);
    c.obstacle_rows = j.value("obstacle_rows", c.obstacle_rows);
    c.horizon = j.value("horizon", c.horizon);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("shooter config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace cvs
