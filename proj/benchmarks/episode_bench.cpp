#include <benchmark/benchmark.h>

#include "cvs/experiment.hpp"

namespace {

using namespace cvs;

// Plays episodes of a built-in experiment on one learning table; reports
// environment steps per second.
void BM_Episodes(benchmark::State& state, const char* name) {
  const ExperimentSpec spec = *find_builtin_experiment(name);
  const ExperimentFactory factory(spec);
  auto env = factory.make_environment();
  auto crit = factory.make_criticality();
  QTable table;
  Rng rng = Rng::for_run(spec.base_seed, 0);
  EpisodeLog log;
  std::int64_t steps = 0;
  for (auto _ : state) {
    log.transitions.clear();
    log.cvs_updates.clear();
    benchmark::DoNotOptimize(run_episode(spec.agent, *env, table, *crit, rng, &log));
    steps += static_cast<std::int64_t>(log.transitions.size());
  }
  state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}

void BM_RunExperiment(benchmark::State& state) {
  ExperimentSpec spec = *find_builtin_experiment("fig4_cvs");
  spec.runs = 4;
  spec.episodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(spec, 1));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Episodes, tree1_qlearning, "fig2_qlearning");
BENCHMARK_CAPTURE(BM_Episodes, tree1_cvs, "fig2_cvs");
BENCHMARK_CAPTURE(BM_Episodes, tree2_qlambda, "fig4_qlambda");
BENCHMARK_CAPTURE(BM_Episodes, tree2_cvs, "fig4_cvs");
BENCHMARK_CAPTURE(BM_Episodes, tree3_mc, "fig6_mc");
BENCHMARK_CAPTURE(BM_Episodes, tree3_cvs, "fig6_cvs");
BENCHMARK_CAPTURE(BM_Episodes, shooter_qlearning, "fig8_qlearning");
BENCHMARK_CAPTURE(BM_Episodes, shooter_cvs, "fig8_cvs");
BENCHMARK(BM_RunExperiment)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
