#include "dlcpriv/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include "dlcpriv/error.hpp"

namespace dlcpriv {

namespace {

// Integer count of `step` in `span`, or throw.
std::size_t whole_steps(double span, double step, const char* what) {
  const double ratio = span / step;
  const double rounded = std::round(ratio);
  if (!(rounded >= 0.0) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << what << " (" << span << " min) must be a whole multiple of " << step << " min";
    throw ConfigError(os.str());
  }
  return static_cast<std::size_t>(rounded);
}

bool on_grid(double minute, double period, double phase) noexcept {
  const double r = std::fmod(minute - phase, period);
  const double tol = 1e-9 * std::max(1.0, period);
  return std::abs(r) < tol || std::abs(r - period) < tol || std::abs(r + period) < tol;
}

template <class Fn>
void for_each_trial(std::size_t n, int threads, Fn&& fn) {
  tbb::task_arena arena(threads > 0 ? threads : tbb::task_arena::automatic);
  arena.execute([&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n), [&](const auto& r) {
      for (std::size_t t = r.begin(); t != r.end(); ++t) fn(t);
    });
  });
}

}  // namespace

void validate(const SamplingPolicy& policy, double step_min) {
  if (!(policy.period_min >= step_min)) {
    throw ConfigError("sampling.period_min must be >= the simulation step");
  }
  whole_steps(policy.period_min, step_min, "sampling.period_min");
  if (!(policy.phase_min >= 0.0)) throw ConfigError("sampling.phase_min must be >= 0");
  whole_steps(policy.phase_min, step_min, "sampling.phase_min");
}

bool is_sampling_step(const SamplingPolicy& policy, std::size_t step, double step_min) noexcept {
  return on_grid(static_cast<double>(step) * step_min, policy.period_min, policy.phase_min);
}

void validate(const DesiredSignalSpec& spec, double step_min) {
  if (!(spec.low_kw <= spec.high_kw)) throw ConfigError("desired_signal.low_kw must be <= high_kw");
  if (!(spec.knot_period_min > 0.0)) throw ConfigError("desired_signal.knot_period_min must be > 0");
  if (!(spec.horizon_min > 0.0)) throw ConfigError("horizon_min must be > 0");
  whole_steps(spec.horizon_min, spec.knot_period_min, "horizon_min");
  whole_steps(spec.horizon_min, step_min, "horizon_min");
}

std::vector<double> generate_desired_signal(const DesiredSignalSpec& spec, double step_min,
                                            const rng::Stream& stream) {
  validate(spec, step_min);
  const std::size_t n_knots = whole_steps(spec.horizon_min, spec.knot_period_min, "horizon_min") + 1;
  std::vector<double> knots(n_knots);
  for (std::size_t j = 0; j < n_knots; ++j) knots[j] = stream.uniform(j, spec.low_kw, spec.high_kw);

  const std::size_t n_steps = whole_steps(spec.horizon_min, step_min, "horizon_min");
  std::vector<double> out(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double pos = static_cast<double>(k) * step_min / spec.knot_period_min;
    auto j = static_cast<std::size_t>(std::floor(pos));
    if (j >= n_knots - 1) {
      out[k] = knots.back();
      continue;
    }
    const double frac = pos - static_cast<double>(j);
    out[k] = frac == 0.0 ? knots[j] : knots[j] + frac * (knots[j + 1] - knots[j]);
  }
  return out;
}

std::size_t Scenario::n_steps() const {
  return whole_steps(desired.horizon_min, step_min(), "horizon_min");
}

void validate(const Scenario& s) {
  validate(s.population);
  validate(s.controller);
  validate(s.sampling, s.step_min());
  validate(s.desired, s.step_min());
  validate(s.noise);
  if (s.controller.command_period_min > 0.0) {
    whole_steps(s.controller.command_period_min, s.step_min(), "controller.command_period_min");
  }
}

TrialInputs draw_trial_inputs(const Scenario& scenario, std::uint64_t seed) {
  validate(scenario);
  PopulationSpec pop = scenario.population;
  pop.seed = seed;
  TrialInputs in;
  in.params = sample_population(pop);
  in.initial = sample_initial_states(in.params, pop.init_on_probability,
                                     rng::Stream(seed, rng::labels::kInitialStates));
  in.desired_kw = generate_desired_signal(scenario.desired, scenario.step_min(),
                                          rng::Stream(seed, rng::labels::kDesiredSignal));
  return in;
}

ErrorMetrics error_metrics(std::span<const double> actual_kw, std::span<const double> desired_kw) {
  if (actual_kw.size() != desired_kw.size()) {
    throw ConfigError("error_metrics: series lengths differ");
  }
  ErrorMetrics m;
  double ss = 0.0;
  for (std::size_t k = 0; k < actual_kw.size(); ++k) {
    const double e = (actual_kw[k] - desired_kw[k]) / 1000.0;
    m.l1 += std::abs(e);
    ss += e * e;
  }
  m.l2 = std::sqrt(ss);
  m.rms = actual_kw.empty() ? 0.0 : m.l2 / std::sqrt(static_cast<double>(actual_kw.size()));
  return m;
}

TrialResult run_closed_loop(const Scenario& scenario, const TrialInputs& inputs,
                            std::uint64_t seed, std::uint64_t trial) {
  const std::size_t n = inputs.params.size();
  const std::size_t n_steps = scenario.n_steps();
  if (inputs.initial.size() != n) throw ConfigError("initial state count does not match population");
  if (inputs.desired_kw.size() != n_steps + 1) {
    throw ConfigError("desired signal length does not match the horizon");
  }

  std::vector<ThermalModel> models;
  models.reserve(n);
  for (const TclParams& p : inputs.params) models.emplace_back(p);

  const rng::Stream noise(seed, rng::labels::kProcessNoise, trial);
  const rng::Stream actuation(seed, rng::labels::kActuation, trial);
  const double sd = scenario.noise.stddev();
  const double step = scenario.step_min();
  const ControllerConfig& cfg = scenario.controller;

  std::vector<TclState> states = inputs.initial;
  EstimatorState est = make_estimator(states);

  TrialResult out;
  out.actual_kw.reserve(n_steps + 1);
  out.n_on.reserve(n_steps + 1);
  out.desired_kw = inputs.desired_kw;
  out.max_excursion.assign(n, 0.0);
  out.forced_toggles.assign(n, 0);

  std::vector<std::uint8_t> toggles(n, 0);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      out.max_excursion[i] =
          std::max(out.max_excursion[i], deadband_excursion(inputs.params[i], states[i].theta));
    }

    std::fill(toggles.begin(), toggles.end(), std::uint8_t{0});
    if (scenario.control_enabled) {
      if (k > 0) {
        if (is_sampling_step(scenario.sampling, k, step)) {
          ingest_measurements(est, states);
        } else {
          estimator_predict(est, models);
        }
      }
      const bool command_round = cfg.command_period_min <= 0.0 ||
                                 on_grid(static_cast<double>(k) * step, cfg.command_period_min, 0.0);
      if (command_round) {
        const auto cmds = compute_commands(est, models, cfg, inputs.desired_kw[k]);
        if (!cmds.empty()) {
          apply_commands_to_estimator(est, models, cmds, cfg.n_bins);
          toggles = actuate(states, models, cmds, cfg.n_bins, actuation, k);
        }
      }
    }

    double power = 0.0;
    std::size_t on = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Mode m = toggles[i] ? toggled(states[i].mode) : states[i].mode;
      if (m == Mode::On) {
        power += inputs.params[i].power_elec;
        ++on;
      }
      out.forced_toggles[i] += toggles[i];
    }
    if (!std::isfinite(power)) throw NumericalError("aggregate power became non-finite");
    out.actual_kw.push_back(power);
    out.n_on.push_back(on);

    if (k == n_steps) break;
    const std::uint64_t base = static_cast<std::uint64_t>(k) * n;
    for (std::size_t i = 0; i < n; ++i) {
      const double eps = sd > 0.0 ? sd * noise.normal(base + i) : 0.0;
      states[i] = models[i].step(states[i], eps, toggles[i] != 0);
    }
  }

  out.errors = error_metrics(out.actual_kw, out.desired_kw);
  return out;
}

TrialResult run_trial(const Scenario& scenario, std::uint64_t seed) {
  return run_closed_loop(scenario, draw_trial_inputs(scenario, seed), seed, 0);
}

SweepResult run_sweep(const Scenario& scenario, const SweepOptions& options) {
  if (options.n_trials < 1) throw ConfigError("sweep needs at least one trial");
  if (options.h_list.empty()) throw ConfigError("sweep needs at least one sampling period");
  validate(scenario);

  std::vector<double> hs = options.h_list;
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  for (double h : hs) {
    SamplingPolicy p = scenario.sampling;
    p.period_min = h;
    validate(p, scenario.step_min());
  }

  const TrialInputs inputs = draw_trial_inputs(scenario, options.base_seed);
  const std::size_t n_trials = options.n_trials;
  const bool compare = options.check_comfort && scenario.control_enabled;

  SweepResult result;
  std::vector<std::vector<double>> baseline_excursion;
  if (compare) {
    Scenario open = scenario;
    open.control_enabled = false;
    baseline_excursion.resize(n_trials);
    result.baseline_l1_trials.resize(n_trials);
    for_each_trial(n_trials, options.threads, [&](std::size_t t) {
      TrialResult r = run_closed_loop(open, inputs, options.base_seed, t);
      result.baseline_l1_trials[t] = r.errors.l1;
      baseline_excursion[t] = std::move(r.max_excursion);
    });
  }

  for (double h : hs) {
    Scenario s = scenario;
    s.sampling.period_min = h;
    SweepRow row;
    row.h_min = h;
    row.l1_trials.resize(n_trials);
    std::vector<std::size_t> violations(n_trials, 0);
    std::vector<double> gaps(n_trials, 0.0);
    for_each_trial(n_trials, options.threads, [&](std::size_t t) {
      const TrialResult r = run_closed_loop(s, inputs, options.base_seed, t);
      row.l1_trials[t] = r.errors.l1;
      if (!compare) return;
      for (std::size_t i = 0; i < r.max_excursion.size(); ++i) {
        const double gap = r.max_excursion[i] - baseline_excursion[t][i];
        if (gap > 0.0) ++violations[t];
        gaps[t] = std::max(gaps[t], gap);
      }
    });
    for (std::size_t t = 0; t < n_trials; ++t) {
      row.comfort_violations += violations[t];
      row.worst_comfort_gap = std::max(row.worst_comfort_gap, gaps[t]);
    }
    row.l1 = stats::box_stats(row.l1_trials);
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace dlcpriv
