#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvs/agents.hpp"
#include "cvs/criticality.hpp"
#include "cvs/environment.hpp"
#include "cvs/road_tree.hpp"
#include "cvs/shooter.hpp"

namespace cvs {

/// Environment selection: "tree1", "tree2", "tree3" (with `siblings`),
/// "shooter" (with `shooter`), or "tree_file" (with `tree`, loaded from
/// `tree_path` when parsed from a config file).
struct EnvSpec {
  std::string name = "tree1";
  int siblings = 99;
  ShooterConfig shooter;
  std::optional<TreeSpec> tree;
  std::string tree_path;
};

/// Provider selection: "constant" (with `constant`), "junction", "shooter",
/// "learned_variance" or "importance".
struct CriticalitySpec {
  std::string name = "junction";
  double constant = 1.0;
};

struct ExperimentSpec {
  std::string name;
  EnvSpec env;
  AgentSpec agent;
  CriticalitySpec criticality;
  int episodes = 1000;
  int runs = 20;
  std::uint64_t base_seed = 0;
  int smoothing_window = 100;

  /// Throws ConfigError for unknown names or out-of-range counts, and
  /// ValidationError for invalid hyper-parameters or environment specs.
  void validate() const;
};

/// Per-run, per-episode undiscounted returns plus their aggregates.
struct RunMatrix {
  std::vector<std::vector<double>> returns;  // [run][episode]
  std::vector<double> mean_curve;            // mean over runs
  std::vector<double> smoothed_curve;        // trailing running mean of mean_curve

  static RunMatrix from_returns(std::vector<std::vector<double>> returns, int smoothing_window);

  std::size_t runs() const noexcept { return returns.size(); }
  std::size_t episodes() const noexcept { return mean_curve.size(); }
};

/// Instantiates environments and providers for an experiment. Built once per
/// experiment (tree specs are validated and shared); each call returns fresh
/// per-run state.
class ExperimentFactory {
 public:
  explicit ExperimentFactory(const ExperimentSpec& spec);

  std::unique_ptr<Environment> make_environment() const;
  std::unique_ptr<CriticalityProvider> make_criticality() const;

 private:
  EnvSpec env_;
  CriticalitySpec crit_;
  std::shared_ptr<const RoadTree> tree_;
};

std::shared_ptr<const RoadTree> build_tree(const EnvSpec& env);

/// Runs every run of `spec`. Run r uses Rng::for_run(base_seed, r), a fresh
/// Q-table (default 0) and fresh provider state. `threads` = 0 picks the
/// hardware concurrency; results do not depend on it.
RunMatrix run_experiment(const ExperimentSpec& spec, unsigned threads = 0);

/// Element e is the mean of curve[max(0, e - window + 1) .. e]. Throws
/// ValidationError when window < 1.
std::vector<double> running_mean(std::span<const double> curve, int window);

/// First 1-based episode at which the trailing mean of `curve` over
/// `window` reaches `threshold`, if any.
std::optional<std::size_t> first_episode_reaching(std::span<const double> curve, int window,
                                                   double threshold);

/// CSV with header episode,mean_return,smoothed_return,run_0,...; values in
/// shortest round-trip form. Throws IoError naming the path on failure.
void write_csv(const RunMatrix& matrix, const std::filesystem::path& path);
std::string to_csv(const RunMatrix& matrix);

/// Reproduction configs: a baseline and a CVS run for each benchmark environment.
std::vector<ExperimentSpec> builtin_experiments();
std::optional<ExperimentSpec> find_builtin_experiment(std::string_view name);
std::vector<std::string> builtin_environment_names();

/// Experiment config documents (JSON). Relative tree paths resolve against
/// `base_dir`. Throws ConfigError on malformed input.
ExperimentSpec parse_experiment(std::string_view json_text,
                                const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment(const std::filesystem::path& path);
std::string experiment_to_json(const ExperimentSpec& spec);

}  // namespace cvs
