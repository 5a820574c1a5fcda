#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cvs/criticality.hpp"
#include "cvs/environment.hpp"
#include "cvs/qtable.hpp"
#include "cvs/rng.hpp"
#include "cvs/types.hpp"

namespace cvs {

// ---------------------------------------------------------------------------
// One-step updates
// ---------------------------------------------------------------------------

/// Q(s,a) += alpha * (r + gamma * max_a' Q(s', a') - Q(s,a)); the bootstrap
/// term is 0 when `terminal`.
void q_learning_update(QTable& table, StateKey s, ActionIndex a, double r, StateKey s_next,
                       int n_actions_next, bool terminal, const AgentConfig& cfg);

/// As q_learning_update with bootstrap Q(s', a').
void sarsa_update(QTable& table, StateKey s, ActionIndex a, double r, StateKey s_next,
                  ActionIndex a_next, bool terminal, const AgentConfig& cfg);

// ---------------------------------------------------------------------------
// Watkins Q(lambda)
// ---------------------------------------------------------------------------

enum class TraceKind { Accumulating, Replacing };

/// Eligibility traces kept in first-visit order so that sweeps are
/// reproducible.
class EligibilityTraces {
 public:
  struct Entry {
    StateKey state;
    ActionIndex action;
    double trace;
  };

  void bump(StateKey s, ActionIndex a, TraceKind kind);
  void scale(double factor);
  void clear();

  double value(StateKey s, ActionIndex a) const;
  std::span<const Entry> entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<StateAction, std::size_t> index_;
};

/// One Watkins Q(lambda) step:
///   delta = r + gamma * max_a' Q(s', a') - Q(s, a)   (no bootstrap if terminal)
///   e(s, a) += 1 (or = 1 for replacing traces)
///   Q += alpha * delta * e for every traced pair
///   traces *= gamma * lambda if a_next was greedy in s', else cleared.
/// Greediness of a_next is judged on Q(s', .) before this step's update.
/// Traces are cleared on terminal transitions.
void watkins_qlambda_step(QTable& table, EligibilityTraces& traces, StateKey s, ActionIndex a,
                          double r, StateKey s_next, ActionIndex a_next, int n_actions_next,
                          bool terminal, const AgentConfig& cfg,
                          TraceKind kind = TraceKind::Accumulating);

// ---------------------------------------------------------------------------
// Monte Carlo control
// ---------------------------------------------------------------------------

struct Transition {
  StateKey state;
  ActionIndex action = 0;
  double reward = 0.0;
};

/// G_t = sum_{k >= t} gamma^(k - t) r_k for every step of a finished episode.
std::vector<double> discounted_returns(std::span<const Transition> episode, double gamma);

/// Every-visit, constant-alpha update toward G_t, applied in time order.
void mc_control_episode(QTable& table, std::span<const Transition> episode,
                        const AgentConfig& cfg);

// ---------------------------------------------------------------------------
// CVS: criticality-based varying step number
// ---------------------------------------------------------------------------

enum class TargetKind { Sarsa, QLearning };

/// Cumulative: a pending pair bootstraps from the first successor at which
/// its summed criticality reaches 1. Threshold: it bootstraps from the first
/// successor, at least two steps later, whose own criticality is >= theta.
enum class Accumulation { Cumulative, Threshold };

/// AccumulateThenCheck adds crit(S') before testing the sum, so a pair
/// bootstraps on the successor that completes the sum. CheckThenAccumulate
/// tests first and fires one step later; kept for comparison only.
enum class CritOrdering { AccumulateThenCheck, CheckThenAccumulate };

struct CvsMode {
  TargetKind target = TargetKind::QLearning;
  Accumulation accumulation = Accumulation::Cumulative;
  double theta = 0.5;
  CritOrdering ordering = CritOrdering::AccumulateThenCheck;

  void validate() const;
};

/// A state-action pair whose update is pending.
struct WaitEntry {
  StateKey state;
  ActionIndex action = 0;
  double acc_reward = 0.0;    // sum_i gamma^i R_{t+i} so far
  double discount_pow = 1.0;  // gamma^steps
  double crit_cum = 0.0;
  int steps = 0;
};

/// Pending pairs in visit order. Repeated visits create separate entries.
using WaitList = std::vector<WaitEntry>;

/// Record of one CVS update, for inspection and testing.
struct CvsUpdate {
  StateKey state;
  ActionIndex action = 0;
  double target = 0.0;
  int steps = 0;                         // n of the n-step return
  std::optional<StateKey> bootstrap;     // empty for terminal flushes
};

void cvs_insert(WaitList& waitlist, StateKey s, ActionIndex a);

/// Advance every pending entry by the transition (r, s_next), in insertion
/// order, and apply the updates whose firing condition holds. The bootstrap
/// value is Q(s_next, a_next) for the SARSA kind and max_a Q(s_next, a) for
/// the Q-learning kind. Fired entries leave the waitlist.
void cvs_step(WaitList& waitlist, QTable& table, const CriticalityProvider& crit, double r,
              StateKey s_next, ActionIndex a_next, int n_actions_next, const CvsMode& mode,
              const AgentConfig& cfg, std::vector<CvsUpdate>* fired = nullptr);

/// Adds the final reward of an episode to every pending entry.
void cvs_accumulate_terminal(WaitList& waitlist, double r, double gamma);

/// Updates every pending entry toward its accumulated return (no bootstrap)
/// in insertion order and empties the waitlist.
void cvs_flush(WaitList& waitlist, QTable& table, const AgentConfig& cfg,
               std::vector<CvsUpdate>* fired = nullptr);

// ---------------------------------------------------------------------------
// Episode driver
// ---------------------------------------------------------------------------

enum class AgentKind { QLearning, Sarsa, QLambda, MonteCarlo, Cvs };

std::string_view agent_kind_name(AgentKind kind) noexcept;
std::optional<AgentKind> parse_agent_kind(std::string_view name) noexcept;

struct AgentSpec {
  AgentKind kind = AgentKind::Cvs;
  AgentConfig config;
  CvsMode cvs;
  TraceKind traces = TraceKind::Accumulating;

  void validate() const;
};

/// Optional trace of an episode.
struct EpisodeLog {
  std::vector<Transition> transitions;
  std::vector<CvsUpdate> cvs_updates;
};

/// Plays one epsilon-greedy episode from env.reset(rng), applying the
/// agent's update rule online (Monte Carlo updates at the end), and returns
/// the undiscounted return. The provider observes every visited state before
/// it is queried. Each non-terminal decision consumes two draws from `rng`.
double run_episode(const AgentSpec& agent, Environment& env, QTable& table,
                   CriticalityProvider& crit, Rng& rng, EpisodeLog* log = nullptr);

}  // namespace cvs
