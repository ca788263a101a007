#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dlcpriv/controller.hpp"
#include "dlcpriv/population.hpp"
#include "dlcpriv/rng.hpp"
#include "dlcpriv/stats.hpp"
#include "dlcpriv/tcl.hpp"

namespace dlcpriv {

/// Full-population snapshots every period_min minutes, offset by phase_min.
struct SamplingPolicy {
  double period_min = 1.0;
  double phase_min = 0.0;
};

void validate(const SamplingPolicy& policy, double step_min);
bool is_sampling_step(const SamplingPolicy& policy, std::size_t step, double step_min) noexcept;

/// Knots drawn i.i.d. uniform on [low_kw, high_kw] every knot_period_min,
/// linearly interpolated in between.
struct DesiredSignalSpec {
  double knot_period_min = 5.0;
  double low_kw = 875.0;     // 0.70 * 1.25 MW
  double high_kw = 1312.5;   // 1.05 * 1.25 MW
  double horizon_min = 60.0;
};

void validate(const DesiredSignalSpec& spec, double step_min);

/// One value per step, horizon/step + 1 entries. Knot j uses counter j.
std::vector<double> generate_desired_signal(const DesiredSignalSpec& spec, double step_min,
                                            const rng::Stream& stream);

struct Scenario {
  PopulationSpec population{};
  ControllerConfig controller{};
  SamplingPolicy sampling{};
  DesiredSignalSpec desired{};
  NoiseModel noise{};
  bool control_enabled = true;

  double step_min() const noexcept { return population.nominal.step_min; }
  std::size_t n_steps() const;  ///< horizon / step
};

void validate(const Scenario& scenario);

/// Everything a trial needs that is held fixed across a sweep.
struct TrialInputs {
  std::vector<TclParams> params;
  std::vector<TclState> initial;
  std::vector<double> desired_kw;
};

/// Population, initial states and desired signal from a master seed. The
/// population stream is keyed by `seed`, not by scenario.population.seed.
TrialInputs draw_trial_inputs(const Scenario& scenario, std::uint64_t seed);

/// Error norms of (actual - desired), reported in MW. Inputs are kW.
struct ErrorMetrics {
  double l1 = 0.0;   ///< sum_k |e_k|
  double l2 = 0.0;   ///< sqrt(sum_k e_k^2)
  double rms = 0.0;  ///< l2 / sqrt(#steps)
};

ErrorMetrics error_metrics(std::span<const double> actual_kw, std::span<const double> desired_kw);

struct TrialResult {
  std::vector<double> actual_kw;
  std::vector<double> desired_kw;
  std::vector<std::size_t> n_on;
  std::vector<double> max_excursion;          ///< per TCL, degC
  std::vector<std::uint32_t> forced_toggles;  ///< per TCL
  ErrorMetrics errors;
};

/// Closed loop for one trial. Each step k = 0..N:
///   1. ingest a snapshot if k is a sampling instant, otherwise dead-reckon;
///   2. (control on) compute commands, fold them into the estimate, actuate;
///   3. record power drawn during the step (modes after any toggles);
///   4. advance every TCL with fresh process noise (skipped at k = N).
/// Process noise for TCL i at step k is the normal draw at counter k*n + i
/// of (seed, "process-noise", trial); actuation uses (seed, "actuation",
/// trial). Controlled and uncontrolled runs of the same trial therefore
/// see identical noise sequences.
TrialResult run_closed_loop(const Scenario& scenario, const TrialInputs& inputs,
                            std::uint64_t seed, std::uint64_t trial);

/// draw_trial_inputs + run_closed_loop with trial index 0.
TrialResult run_trial(const Scenario& scenario, std::uint64_t seed);

struct SweepOptions {
  std::vector<double> h_list{1.0};
  std::size_t n_trials = 500;
  std::uint64_t base_seed = 1;
  int threads = 0;  ///< 0: scheduler default
  /// Also run each trial uncontrolled and compare per-TCL excursions.
  bool check_comfort = true;
};

struct SweepRow {
  double h_min = 0.0;
  stats::BoxStats l1;
  std::vector<double> l1_trials;  ///< indexed by trial
  /// (trial, TCL) pairs whose controlled excursion exceeds the uncontrolled one.
  std::size_t comfort_violations = 0;
  double worst_comfort_gap = 0.0;  ///< largest controlled - uncontrolled excursion, degC
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< ascending h
  /// Uncontrolled l1 for the same trials; filled when comfort is checked.
  std::vector<double> baseline_l1_trials;
};

/// One population, initial condition and desired signal from base_seed,
/// reused for every h and trial; only noise and actuation vary per trial.
SweepResult run_sweep(const Scenario& scenario, const SweepOptions& options);

}  // namespace dlcpriv
