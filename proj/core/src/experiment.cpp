#include "cvs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <mutex>
#include <system_error>
#include <thread>

#include "cvs/errors.hpp"

namespace cvs {
namespace {

bool is_tree_env(std::string_view name) {
  return name == "tree1" || name == "tree2" || name == "tree3" || name == "tree_file";
}

void append_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

void ExperimentSpec::validate() const {
  if (episodes < 1) throw ConfigError("experiment '" + name + "': episodes must be >= 1");
  if (runs < 1) throw ConfigError("experiment '" + name + "': runs must be >= 1");
  if (smoothing_window < 1) {
    throw ConfigError("experiment '" + name + "': smoothing_window must be >= 1");
  }
  agent.validate();

  if (!is_tree_env(env.name) && env.name != "shooter") {
    throw ConfigError("unknown environment '" + env.name + "'");
  }
  if (env.name == "tree_file" && !env.tree) {
    throw ConfigError("environment 'tree_file' requires a tree spec");
  }
  if (env.name == "shooter") env.shooter.validate();

  const auto& c = criticality.name;
  if (c == "junction") {
    if (!is_tree_env(env.name)) {
      throw ConfigError("criticality 'junction' needs a road-tree environment, not '" + env.name +
                        "'");
    }
  } else if (c == "shooter") {
    if (env.name != "shooter") {
      throw ConfigError("criticality 'shooter' needs the shooter environment, not '" + env.name +
                        "'");
    }
  } else if (c == "constant") {
    ConstantCriticality check(criticality.constant);
  } else if (c != "learned_variance" && c != "importance") {
    throw ConfigError("unknown criticality provider '" + c + "'");
  }
}

RunMatrix RunMatrix::from_returns(std::vector<std::vector<double>> returns, int smoothing_window) {
  RunMatrix m;
  const std::size_t episodes = returns.empty() ? 0 : returns.front().size();
  m.mean_curve.assign(episodes, 0.0);
  for (std::size_t e = 0; e < episodes; ++e) {
    double sum = 0.0;
    for (const auto& run : returns) sum += run.at(e);
    m.mean_curve[e] = sum / static_cast<double>(returns.size());
  }
  m.smoothed_curve = running_mean(m.mean_curve, smoothing_window);
  m.returns = std::move(returns);
  return m;
}

std::shared_ptr<const RoadTree> build_tree(const EnvSpec& env) {
  if (env.name == "tree1") return std::make_shared<const RoadTree>(tree1());
  if (env.name == "tree2") return std::make_shared<const RoadTree>(tree2());
  if (env.name == "tree3") return std::make_shared<const RoadTree>(tree3(env.siblings));
  if (env.name == "tree_file" && env.tree) return std::make_shared<const RoadTree>(*env.tree);
  return nullptr;
}

ExperimentFactory::ExperimentFactory(const ExperimentSpec& spec)
    : env_(spec.env), crit_(spec.criticality), tree_(build_tree(spec.env)) {}

std::unique_ptr<Environment> ExperimentFactory::make_environment() const {
  if (tree_) return std::make_unique<RoadTreeEnv>(tree_);
  if (env_.name == "shooter") return std::make_unique<ShooterEnv>(env_.shooter);
  throw ConfigError("unknown environment '" + env_.name + "'");
}

std::unique_ptr<CriticalityProvider> ExperimentFactory::make_criticality() const {
  if (crit_.name == "constant") return std::make_unique<ConstantCriticality>(crit_.constant);
  if (crit_.name == "junction" && tree_) return std::make_unique<JunctionCriticality>(tree_);
  if (crit_.name == "shooter") return std::make_unique<ShooterCriticality>();
  if (crit_.name == "learned_variance") return std::make_unique<LearnedVarianceCriticality>();
  if (crit_.name == "importance") return std::make_unique<ImportanceCriticality>();
  throw ConfigError("unknown criticality provider '" + crit_.name + "'");
}

RunMatrix run_experiment(const ExperimentSpec& spec, unsigned threads) {
  spec.validate();
  const ExperimentFactory factory(spec);
  // Surface construction errors before any run starts.
  factory.make_environment();
  factory.make_criticality();

  const auto runs = static_cast<std::size_t>(spec.runs);
  std::vector<std::vector<double>> returns(runs);

  const auto run_one = [&](std::size_t r) {
    auto env = factory.make_environment();
    auto crit = factory.make_criticality();
    QTable table(0.0);
    Rng rng = Rng::for_run(spec.base_seed, r);
    auto& out = returns[r];
    out.reserve(static_cast<std::size_t>(spec.episodes));
    for (int e = 0; e < spec.episodes; ++e) {
      out.push_back(run_episode(spec.agent, *env, table, *crit, rng));
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, runs));

  if (threads <= 1) {
    for (std::size_t r = 0; r < runs; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < runs; r = next++) {
          try {
            run_one(r);
          } catch (...) {
            const std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  return RunMatrix::from_returns(std::move(returns), spec.smoothing_window);
}

std::vector<double> running_mean(std::span<const double> curve, int window) {
  if (window < 1) throw ValidationError("running_mean: window must be >= 1");
  const auto w = static_cast<std::size_t>(window);
  std::vector<double> out(curve.size());
  for (std::size_t e = 0; e < curve.size(); ++e) {
    const std::size_t lo = e + 1 >= w ? e + 1 - w : 0;
    double sum = 0.0;
    for (std::size_t i = lo; i <= e; ++i) sum += curve[i];
    out[e] = sum / static_cast<double>(e - lo + 1);
  }
  return out;
}

std::optional<std::size_t> first_episode_reaching(std::span<const double> curve, int window,
                                                   double threshold) {
  const auto smoothed = running_mean(curve, window);
  for (std::size_t e = 0; e < smoothed.size(); ++e) {
    if (smoothed[e] >= threshold) return e + 1;
  }
  return std::nullopt;
}

std::string to_csv(const RunMatrix& m) {
  std::string out = "episode,mean_return,smoothed_return";
  for (std::size_t r = 0; r < m.runs(); ++r) out += ",run_" + std::to_string(r);
  out += '\n';
  for (std::size_t e = 0; e < m.episodes(); ++e) {
    out += std::to_string(e);
    out += ',';
    append_number(out, m.mean_curve[e]);
    out += ',';
    append_number(out, m.smoothed_curve[e]);
    for (const auto& run : m.returns) {
      out += ',';
      append_number(out, run[e]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const RunMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  const std::string text = to_csv(matrix);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<ExperimentSpec> builtin_experiments() {
  const auto make = [](std::string name, std::string env, AgentKind kind, std::string crit,
                       int episodes, std::uint64_t seed) {
    ExperimentSpec s;
    s.name = std::move(name);
    s.env.name = std::move(env);
    s.agent.kind = kind;
    s.criticality.name = std::move(crit);
    s.episodes = episodes;
    s.runs = 20;
    s.base_seed = seed;
    s.smoothing_window = 100;
    return s;
  };

  // Baseline and CVS share a seed within each pair.
  std::vector<ExperimentSpec> out{
      make("fig2_qlearning", "tree1", AgentKind::QLearning, "junction", 8000, 1002),
      make("fig2_cvs", "tree1", AgentKind::Cvs, "junction", 8000, 1002),
      make("fig4_qlambda", "tree2", AgentKind::QLambda, "junction", 1000, 1004),
      make("fig4_cvs", "tree2", AgentKind::Cvs, "junction", 1000, 1004),
      make("fig6_mc", "tree3", AgentKind::MonteCarlo, "junction", 600, 1006),
      make("fig6_cvs", "tree3", AgentKind::Cvs, "junction", 600, 1006),
      make("fig8_qlearning", "shooter", AgentKind::QLearning, "shooter", 2000, 1008),
      make("fig8_cvs", "shooter", AgentKind::Cvs, "shooter", 2000, 1008),
  };
  for (auto& s : out) {
    if (s.agent.kind == AgentKind::QLambda) s.agent.config.lambda = 0.9;
  }
  return out;
}

std::optional<ExperimentSpec> find_builtin_experiment(std::string_view name) {
  for (auto& s : builtin_experiments()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

std::vector<std::string> builtin_environment_names() {
  return {"tree1", "tree2", "tree3", "shooter", "tree_file"};
}

}  // namespace cvs
