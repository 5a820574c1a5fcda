// JSON experiment documents.
//
// {
//   "name": "my_run",
//   "env": {"name": "tree3", "siblings": 99},          // or "tree1", "tree2",
//                                                       // {"name": "shooter", <ShooterConfig>},
//                                                       // {"name": "tree_file", "path": "t.json"}
//   "agent": {"name": "cvs", "alpha": 0.1, "gamma": 1, "epsilon": 0.1, "lambda": 0.9,
//             "target_kind": "q_learning", "accumulation": "cumulative", "theta": 0.5,
//             "ordering": "accumulate_then_check", "traces": "accumulating"},
//   "criticality": {"name": "constant", "c": 0.5},     // or a bare name string
//   "episodes": 1000, "runs": 20, "base_seed": 0, "smoothing_window": 100
// }

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "cvs/errors.hpp"
#include "cvs/experiment.hpp"

namespace cvs {
namespace {

using nlohmann::json;

void require_keys(const json& j, std::string_view where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

json named(const json& j) {
  return j.is_string() ? json{{"name", j.get<std::string>()}} : j;
}

template <typename Enum>
Enum parse_enum(const json& j, const char* key, Enum fallback,
                std::initializer_list<std::pair<const char*, Enum>> options) {
  if (!j.contains(key)) return fallback;
  const auto text = j.at(key).get<std::string>();
  for (const auto& [name, value] : options) {
    if (text == name) return value;
  }
  throw ConfigError(std::string("agent: bad value '") + text + "' for '" + key + "'");
}

template <typename Enum>
const char* enum_name(Enum value, std::initializer_list<std::pair<const char*, Enum>> options) {
  for (const auto& [name, v] : options) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::initializer_list<std::pair<const char*, TargetKind>> kTargets = {
    {"q_learning", TargetKind::QLearning}, {"sarsa", TargetKind::Sarsa}};
constexpr std::initializer_list<std::pair<const char*, Accumulation>> kAccumulations = {
    {"cumulative", Accumulation::Cumulative}, {"threshold", Accumulation::Threshold}};
constexpr std::initializer_list<std::pair<const char*, CritOrdering>> kOrderings = {
    {"accumulate_then_check", CritOrdering::AccumulateThenCheck},
    {"check_then_accumulate", CritOrdering::CheckThenAccumulate}};
constexpr std::initializer_list<std::pair<const char*, TraceKind>> kTraces = {
    {"accumulating", TraceKind::Accumulating}, {"replacing", TraceKind::Replacing}};

EnvSpec parse_env(const json& raw, const std::filesystem::path& base_dir) {
  const json j = named(raw);
  EnvSpec env;
  env.name = j.at("name").get<std::string>();
  if (env.name == "tree3") {
    require_keys(j, "env", {"name", "siblings"});
    env.siblings = j.value("siblings", env.siblings);
  } else if (env.name == "shooter") {
    require_keys(j, "env",
                 {"name", "n_rows", "n_cols", "obstacle_col", "obstacle_rows", "horizon"});
    json cfg = j;
    cfg.erase("name");
    env.shooter = parse_shooter_config(cfg.dump());
  } else if (env.name == "tree_file") {
    require_keys(j, "env", {"name", "path", "tree"});
    if (j.contains("tree")) {
      env.tree = parse_tree_spec(j.at("tree").dump());
    } else if (j.contains("path")) {
      std::filesystem::path p = j.at("path").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      env.tree_path = p.string();
      env.tree = load_tree_spec(p);
    } else {
      throw ConfigError("env 'tree_file' needs 'path' or 'tree'");
    }
  } else if (env.name == "tree1" || env.name == "tree2") {
    require_keys(j, "env", {"name"});
  } else {
    throw ConfigError("unknown environment '" + env.name + "'");
  }
  return env;
}

AgentSpec parse_agent(const json& raw) {
  const json j = named(raw);
  require_keys(j, "agent",
               {"name", "alpha", "gamma", "epsilon", "lambda", "target_kind", "accumulation",
                "theta", "ordering", "traces"});
  AgentSpec a;
  const auto name = j.at("name").get<std::string>();
  const auto kind = parse_agent_kind(name);
  if (!kind) throw ConfigError("unknown agent '" + name + "'");
  a.kind = *kind;
  a.config.alpha = j.value("alpha", a.config.alpha);
  a.config.gamma = j.value("gamma", a.config.gamma);
  a.config.epsilon = j.value("epsilon", a.config.epsilon);
  a.config.lambda = j.value("lambda", a.config.lambda);
  a.cvs.target = parse_enum(j, "target_kind", a.cvs.target, kTargets);
  a.cvs.accumulation = parse_enum(j, "accumulation", a.cvs.accumulation, kAccumulations);
  a.cvs.theta = j.value("theta", a.cvs.theta);
  a.cvs.ordering = parse_enum(j, "ordering", a.cvs.ordering, kOrderings);
  a.traces = parse_enum(j, "traces", a.traces, kTraces);
  return a;
}

CriticalitySpec parse_criticality(const json& raw) {
  const json j = named(raw);
  require_keys(j, "criticality", {"name", "c"});
  CriticalitySpec c;
  c.name = j.at("name").get<std::string>();
  c.constant = j.value("c", c.constant);
  return c;
}

}  // namespace

ExperimentSpec parse_experiment(std::string_view json_text, const std::filesystem::path& base_dir) {
  ExperimentSpec spec;
  try {
    const json j = json::parse(json_text);
    require_keys(j, "experiment",
                 {"name", "env", "agent", "criticality", "episodes", "runs", "base_seed",
                  "smoothing_window"});
    spec.name = j.value("name", std::string("experiment"));
    if (!j.contains("env") || !j.contains("agent")) {
      throw ConfigError("experiment: 'env' and 'agent' are required");
    }
    spec.env = parse_env(j.at("env"), base_dir);
    spec.agent = parse_agent(j.at("agent"));
    if (j.contains("criticality")) {
      spec.criticality = parse_criticality(j.at("criticality"));
    } else if (spec.env.name == "shooter") {
      spec.criticality.name = "shooter";
    }
    spec.episodes = j.value("episodes", spec.episodes);
    spec.runs = j.value("runs", spec.runs);
    spec.base_seed = j.value("base_seed", spec.base_seed);
    spec.smoothing_window = j.value("smoothing_window", spec.smoothing_window);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read experiment file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment(buf.str(), path.parent_path());
}

std::string experiment_to_json(const ExperimentSpec& spec) {
  json env{{"name", spec.env.name}};
  if (spec.env.name == "tree3") env["siblings"] = spec.env.siblings;
  if (spec.env.name == "shooter") {
    const auto& c = spec.env.shooter;
    env.update({{"n_rows", c.n_rows},
                {"n_cols", c.n_cols},
                {"obstacle_col", c.obstacle_col},
                {"obstacle_rows", c.obstacle_rows},
                {"horizon", c.horizon}});
  }
  if (spec.env.name == "tree_file" && spec.env.tree) {
    env["tree"] = json::parse(tree_spec_to_json(*spec.env.tree));
  }

  const auto& a = spec.agent;
  json agent{{"name", std::string(agent_kind_name(a.kind))},
             {"alpha", a.config.alpha},
             {"gamma", a.config.gamma},
             {"epsilon", a.config.epsilon}};
  if (a.kind == AgentKind::QLambda) {
    agent["lambda"] = a.config.lambda;
    agent["traces"] = enum_name(a.traces, kTraces);
  }
  if (a.kind == AgentKind::Cvs) {
    agent["target_kind"] = enum_name(a.cvs.target, kTargets);
    agent["accumulation"] = enum_name(a.cvs.accumulation, kAccumulations);
    agent["ordering"] = enum_name(a.cvs.ordering, kOrderings);
    if (a.cvs.accumulation == Accumulation::Threshold) agent["theta"] = a.cvs.theta;
  }

  json crit{{"name", spec.criticality.name}};
  if (spec.criticality.name == "constant") crit["c"] = spec.criticality.constant;

  const json j{{"name", spec.name},
               {"env", env},
               {"agent", agent},
               {"criticality", crit},
               {"episodes", spec.episodes},
               {"runs", spec.runs},
               {"base_seed", spec.base_seed},
               {"smoothing_window", spec.smoothing_window}};
  return j.dump(2);
}

}  // namespace cvs
