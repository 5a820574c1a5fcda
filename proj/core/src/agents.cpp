#include "cvs/agents.hpp"

#include <algorithm>
#include <string>

#include "cvs/errors.hpp"
#include "cvs/policy.hpp"

namespace cvs {
namespace {

void move_toward(QTable& table, StateKey s, ActionIndex a, double target, double alpha) {
  const double q = table.value(s, a);
  table.set(s, a, q + alpha * (target - q));
}

bool is_greedy(const QTable& table, StateKey s, ActionIndex a, int n_actions) {
  return table.value(s, a) == table.max_value(s, n_actions);
}

}  // namespace

void q_learning_update(QTable& table, StateKey s, ActionIndex a, double r, StateKey s_next,
                       int n_actions_next, bool terminal, const AgentConfig& cfg) {
  const double bootstrap = terminal ? 0.0 : table.max_value(s_next, n_actions_next);
  move_toward(table, s, a, r + cfg.gamma * bootstrap, cfg.alpha);
}

void sarsa_update(QTable& table, StateKey s, ActionIndex a, double r, StateKey s_next,
                  ActionIndex a_next, bool terminal, const AgentConfig& cfg) {
  const double bootstrap = terminal ? 0.0 : table.value(s_next, a_next);
  move_toward(table, s, a, r + cfg.gamma * bootstrap, cfg.alpha);
}

// --- Q(lambda) --------------------------------------------------------------

void EligibilityTraces::bump(StateKey s, ActionIndex a, TraceKind kind) {
  const auto [it, inserted] = index_.try_emplace(StateAction{s, a}, entries_.size());
  if (inserted) {
    entries_.push_back(Entry{s, a, 1.0});
    return;
  }
  double& e = entries_[it->second].trace;
  e = kind == TraceKind::Accumulating ? e + 1.0 : 1.0;
}

void EligibilityTraces::scale(double factor) {
  for (auto& e : entries_) e.trace *= factor;
}

void EligibilityTraces::clear() {
  entries_.clear();
  index_.clear();
}

double EligibilityTraces::value(StateKey s, ActionIndex a) const {
  const auto it = index_.find(StateAction{s, a});
  return it == index_.end() ? 0.0 : entries_[it->second].trace;
}

void watkins_qlambda_step(QTable& table, EligibilityTraces& traces, StateKey s, ActionIndex a,
                          double r, StateKey s_next, ActionIndex a_next, int n_actions_next,
                          bool terminal, const AgentConfig& cfg, TraceKind kind) {
  const double bootstrap = terminal ? 0.0 : table.max_value(s_next, n_actions_next);
  const bool greedy_next = !terminal && is_greedy(table, s_next, a_next, n_actions_next);
  const double delta = r + cfg.gamma * bootstrap - table.value(s, a);

  traces.bump(s, a, kind);
  for (const auto& e : traces.entries()) {
    table.set(e.state, e.action, table.value(e.state, e.action) + cfg.alpha * delta * e.trace);
  }

  if (greedy_next) {
    traces.scale(cfg.gamma * cfg.lambda);
  } else {
    traces.clear();
  }
}

// --- Monte Carlo ------------------------------------------------------------

std::vector<double> discounted_returns(std::span<const Transition> episode, double gamma) {
  std::vector<double> g(episode.size());
  double acc = 0.0;
  for (std::size_t t = episode.size(); t-- > 0;) {
    acc = episode[t].reward + gamma * acc;
    g[t] = acc;
  }
  return g;
}

void mc_control_episode(QTable& table, std::span<const Transition> episode,
                        const AgentConfig& cfg) {
  const std::vector<double> g = discounted_returns(episode, cfg.gamma);
  for (std::size_t t = 0; t < episode.size(); ++t) {
    move_toward(table, episode[t].state, episode[t].action, g[t], cfg.alpha);
  }
}

// --- CVS --------------------------------------------------------------------

void CvsMode::validate() const {
  if (accumulation == Accumulation::Threshold && !(theta > 0.0 && theta <= 1.0)) {
    throw ValidationError("cvs: theta must be in (0, 1], got " + std::to_string(theta));
  }
}

void cvs_insert(WaitList& waitlist, StateKey s, ActionIndex a) {
  waitlist.push_back(WaitEntry{s, a});
}

void cvs_step(WaitList& waitlist, QTable& table, const CriticalityProvider& crit, double r,
              StateKey s_next, ActionIndex a_next, int n_actions_next, const CvsMode& mode,
              const AgentConfig& cfg, std::vector<CvsUpdate>* fired) {
  const double c = crit.criticality(s_next);

  const auto bootstrap = [&] {
    return mode.target == TargetKind::Sarsa ? table.value(s_next, a_next)
                                            : table.max_value(s_next, n_actions_next);
  };

  const auto ready = [&](WaitEntry& e) {
    if (mode.accumulation == Accumulation::Threshold) {
      return e.steps >= 2 && c >= mode.theta;
    }
    if (mode.ordering == CritOrdering::CheckThenAccumulate) {
      if (e.crit_cum >= 1.0) return true;
      e.crit_cum += c;
      return false;
    }
    e.crit_cum += c;
    return e.crit_cum >= 1.0;
  };

  std::size_t kept = 0;
  for (std::size_t i = 0; i < waitlist.size(); ++i) {
    WaitEntry& e = waitlist[i];
    e.acc_reward += e.discount_pow * r;
    e.discount_pow *= cfg.gamma;
    e.steps += 1;

    if (ready(e)) {
      const double target = e.acc_reward + e.discount_pow * bootstrap();
      move_toward(table, e.state, e.action, target, cfg.alpha);
      if (fired) fired->push_back(CvsUpdate{e.state, e.action, target, e.steps, s_next});
      continue;
    }
    if (kept != i) waitlist[kept] = e;
    ++kept;
  }
  waitlist.resize(kept);
}

void cvs_accumulate_terminal(WaitList& waitlist, double r, double gamma) {
  for (auto& e : waitlist) {
    e.acc_reward += e.discount_pow * r;
    e.discount_pow *= gamma;
    e.steps += 1;
  }
}

void cvs_flush(WaitList& waitlist, QTable& table, const AgentConfig& cfg,
               std::vector<CvsUpdate>* fired) {
  for (const auto& e : waitlist) {
    move_toward(table, e.state, e.action, e.acc_reward, cfg.alpha);
    if (fired) fired->push_back(CvsUpdate{e.state, e.action, e.acc_reward, e.steps, std::nullopt});
  }
  waitlist.clear();
}

// --- Driver -----------------------------------------------------------------

std::string_view agent_kind_name(AgentKind kind) noexcept {
  switch (kind) {
    case AgentKind::QLearning: return "q_learning";
    case AgentKind::Sarsa: return "sarsa";
    case AgentKind::QLambda: return "q_lambda";
    case AgentKind::MonteCarlo: return "monte_carlo";
    case AgentKind::Cvs: return "cvs";
  }
  return "unknown";
}

std::optional<AgentKind> parse_agent_kind(std::string_view name) noexcept {
  for (AgentKind k : {AgentKind::QLearning, AgentKind::Sarsa, AgentKind::QLambda,
                      AgentKind::MonteCarlo, AgentKind::Cvs}) {
    if (agent_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

void AgentSpec::validate() const {
  config.validate();
  if (kind == AgentKind::Cvs) cvs.validate();
}

double run_episode(const AgentSpec& agent, Environment& env, QTable& table,
                   CriticalityProvider& crit, Rng& rng, EpisodeLog* log) {
  const AgentConfig& cfg = agent.config;

  StateKey s = env.reset(rng);
  int n = env.action_count();
  crit.observe(table, s, n);
  if (n == 0) return 0.0;
  ActionIndex a = epsilon_greedy(table, s, n, cfg.epsilon, rng);

  WaitList waitlist;
  EligibilityTraces traces;
  std::vector<Transition> episode;
  std::vector<CvsUpdate>* fired = log ? &log->cvs_updates : nullptr;
  double episode_return = 0.0;

  while (true) {
    const StepOutcome out = env.step(a);
    episode_return += out.reward;
    const StateKey s_next = out.next_state;
    const int n_next = out.terminal ? 0 : env.action_count();
    if (log) log->transitions.push_back(Transition{s, a, out.reward});

    crit.observe(table, s_next, n_next);
    const ActionIndex a_next =
        out.terminal ? 0 : epsilon_greedy(table, s_next, n_next, cfg.epsilon, rng);

    switch (agent.kind) {
      case AgentKind::QLearning:
        q_learning_update(table, s, a, out.reward, s_next, n_next, out.terminal, cfg);
        break;
      case AgentKind::Sarsa:
        sarsa_update(table, s, a, out.reward, s_next, a_next, out.terminal, cfg);
        break;
      case AgentKind::QLambda:
        watkins_qlambda_step(table, traces, s, a, out.reward, s_next, a_next, n_next,
                             out.terminal, cfg, agent.traces);
        break;
      case AgentKind::MonteCarlo:
        episode.push_back(Transition{s, a, out.reward});
        break;
      case AgentKind::Cvs:
        cvs_insert(waitlist, s, a);
        if (out.terminal) {
          cvs_accumulate_terminal(waitlist, out.reward, cfg.gamma);
          cvs_flush(waitlist, table, cfg, fired);
        } else {
          cvs_step(waitlist, table, crit, out.reward, s_next, a_next, n_next, agent.cvs, cfg,
                   fired);
        }
        break;
    }

    if (out.terminal) break;
    s = s_next;
    a = a_next;
  }

  if (agent.kind == AgentKind::MonteCarlo) mc_control_episode(table, episode, cfg);
  return episode_return;
}

}  // namespace cvs
