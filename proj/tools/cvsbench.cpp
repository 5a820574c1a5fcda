// cvsbench: run and reproduce tabular CVS learning-curve experiments.
//
//   cvsbench list
//   cvsbench run --spec fig2_cvs --out results/
//   cvsbench run --spec my_experiment.json --runs 5 --episodes 300
//   cvsbench reproduce --all --out results/

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cvs/errors.hpp"
#include "cvs/experiment.hpp"

namespace {

namespace fs = std::filesystem;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<int> episodes;
};

cvs::ExperimentSpec resolve_spec(const std::string& name_or_file) {
  if (auto builtin = cvs::find_builtin_experiment(name_or_file)) return *builtin;
  if (fs::exists(name_or_file)) return cvs::load_experiment(name_or_file);
  throw cvs::ConfigError("'" + name_or_file +
                         "' is neither a built-in experiment nor a readable file");
}

void run_one(cvs::ExperimentSpec spec, const Overrides& o, const fs::path& out_dir,
             unsigned threads) {
  if (o.seed) spec.base_seed = *o.seed;
  if (o.runs) spec.runs = *o.runs;
  if (o.episodes) spec.episodes = *o.episodes;

  const cvs::RunMatrix m = cvs::run_experiment(spec, threads);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw cvs::IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  const fs::path csv = out_dir / (spec.name + ".csv");
  cvs::write_csv(m, csv);

  std::cout << std::left << std::setw(16) << spec.name << " runs=" << m.runs()
            << " episodes=" << m.episodes() << " final_smoothed=" << std::fixed
            << std::setprecision(4) << m.smoothed_curve.back() << " -> " << csv.string()
            << '\n';
  std::cout.unsetf(std::ios::floatfield);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabular reinforcement-learning workbench for criticality-based varying step-number learning"};
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads for runs (0 = hardware concurrency)");

  auto* list = app.add_subcommand("list", "List built-in experiments and environments");

  std::string spec_name;
  std::string out_dir = "results";
  Overrides overrides;
  auto* run = app.add_subcommand("run", "Run one experiment and write <out>/<name>.csv");
  run->add_option("--spec", spec_name, "Built-in experiment name or JSON experiment file")
      ->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", overrides.seed, "Override base seed");
  run->add_option("--runs", overrides.runs, "Override number of runs")->check(CLI::PositiveNumber);
  run->add_option("--episodes", overrides.episodes, "Override episodes per run")
      ->check(CLI::PositiveNumber);

  bool all = false;
  std::string reproduce_out = "results";
  auto* reproduce = app.add_subcommand("reproduce", "Run every built-in experiment");
  reproduce->add_flag("--all", all, "Run all built-in experiments")->required();
  reproduce->add_option("--out", reproduce_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      std::cout << "experiments:\n";
      for (const auto& s : cvs::builtin_experiments()) {
        std::cout << "  " << std::left << std::setw(16) << s.name << " env=" << s.env.name
                  << " agent=" << cvs::agent_kind_name(s.agent.kind)
                  << " criticality=" << s.criticality.name << " episodes=" << s.episodes
                  << " runs=" << s.runs << '\n';
      }
      std::cout << "environments:\n";
      for (const auto& e : cvs::builtin_environment_names()) std::cout << "  " << e << '\n';
    } else if (*run) {
      run_one(resolve_spec(spec_name), overrides, out_dir, threads);
    } else if (*reproduce && all) {
      for (const auto& s : cvs::builtin_experiments()) run_one(s, {}, reproduce_out, threads);
    }
  } catch (const cvs::IoError& e) {
    std::cerr << "cvsbench: I/O error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cvsbench: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
