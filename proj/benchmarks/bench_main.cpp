#include <benchmark/benchmark.h>

#include <vector>

#include "dlcpriv/privacy.hpp"
#include "dlcpriv/sim.hpp"

using namespace dlcpriv;

static void BM_ThermalStepPopulation(benchmark::State& state) {
  const auto params = sample_population(PopulationSpec{});
  const std::vector<ThermalModel> models(params.begin(), params.end());
  std::vector<TclState> states(params.size(), TclState{20.0, Mode::On});
  for (auto _ : state) {
    for (std::size_t i = 0; i < states.size(); ++i) states[i] = models[i].step(states[i], 0.0, false);
    benchmark::DoNotOptimize(states.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(states.size()));
}
BENCHMARK(BM_ThermalStepPopulation);

static void BM_ClosedLoopTrial(benchmark::State& state) {
  Scenario s;
  s.sampling.period_min = static_cast<double>(state.range(0));
  const TrialInputs in = draw_trial_inputs(s, 1);
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_closed_loop(s, in, 1, trial++).errors.l1);
}
BENCHMARK(BM_ClosedLoopTrial)->Arg(1)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_MapExact(benchmark::State& state) {
  const privacy::PrivacyScenario recs = privacy::recs_income_scenario();
  const std::vector<double> mu{0.82, 0.99, 1.26};
  for (auto _ : state) {
    benchmark::DoNotOptimize(privacy::map_error_exact_shared_scale(recs.prior, mu, 0.49, 60).alpha);
  }
}
BENCHMARK(BM_MapExact);

static void BM_MapMonteCarlo(benchmark::State& state) {
  const privacy::PrivacyScenario recs = privacy::recs_income_scenario();
  const std::vector<double> mu{0.82, 0.99, 1.26};
  const auto family = privacy::point_mass_family(mu, 0.49);
  privacy::MonteCarloOptions opts;
  opts.n_mc = 100000;
  opts.threads = 1;
  const auto samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(privacy::map_error_monte_carlo(recs.prior, family, samples, opts).alpha);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opts.n_mc));
}
BENCHMARK(BM_MapMonteCarlo)->Arg(1)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
