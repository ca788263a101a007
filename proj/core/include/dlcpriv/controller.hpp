#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dlcpriv/rng.hpp"
#include "dlcpriv/tcl.hpp"

namespace dlcpriv {

struct ControllerConfig {
  /// Total bins across both modes; half are OFF bins, half ON bins.
  int n_bins = 10;
  /// Minutes between command rounds; 0 means every simulation step.
  double command_period_min = 0.0;
  /// No commands while |P_des - estimated power| is below this (kW).
  double deadzone_kw = 2.5;
};

void validate(const ControllerConfig& cfg);

/// Dead-reckoned copy of every TCL's state. on_fraction is the expected ON
/// occupancy: exactly 0 or 1 right after a measurement, fractional once
/// probabilistic commands have been accounted for.
struct EstimatorState {
  std::vector<double> theta;
  std::vector<double> on_fraction;

  std::size_t size() const noexcept { return theta.size(); }
};

struct SwitchCommand {
  int bin = 0;
  double fraction = 0.0;  ///< probability that a TCL in this bin toggles

  bool operator==(const SwitchCommand&) const = default;
};

/// Commands only ever tighten the deadband: a TCL outside its band (it has
/// just crossed an edge and hysteresis is already pulling it back) neither
/// counts as switchable nor obeys a command.
bool inside_deadband(const TclParams& params, double theta) noexcept;

/// Position inside the deadband, clamped to [0, 1].
double normalized_position(const TclParams& params, double theta) noexcept;

/// Bin layout for n bins (n even, half = n/2):
///   [0, half)  OFF bins, index increasing with temperature
///   [half, n)  ON bins, index decreasing with temperature
/// so bin half-1 holds the warmest OFF TCLs and bin n-1 the coolest ON TCLs;
/// both are the next to switch naturally.
int assign_bin(double x, Mode mode, int n_bins) noexcept;

inline bool is_off_bin(int bin, int n_bins) noexcept { return bin < n_bins / 2; }

EstimatorState make_estimator(std::span<const TclState> states);

double estimated_power_kw(const EstimatorState& est, std::span<const ThermalModel> models);

/// Zero-noise, no-command propagation by one step. A fractional estimate
/// evolves as the on_fraction-weighted mix of its ON and OFF branches,
/// each branch applying its own hysteresis decision.
void estimator_predict(EstimatorState& est, std::span<const ThermalModel> models);

/// Replace the estimate with a full-population snapshot.
void ingest_measurements(EstimatorState& est, std::span<const TclState> observed);

/// Greedy fractional commands that close P_des - estimated power. Walks OFF
/// bins warmest-first when more power is needed, ON bins coolest-first when
/// less is needed. Saturates once switchable power runs out.
std::vector<SwitchCommand> compute_commands(const EstimatorState& est,
                                            std::span<const ThermalModel> models,
                                            const ControllerConfig& cfg,
                                            double p_des_kw);

/// Per-bin switch probabilities (zero where no command was issued).
std::vector<double> bin_fractions(std::span<const SwitchCommand> cmds, int n_bins);

/// Mean-field account of the controller's own commands: in each commanded
/// bin a fraction c of the switchable mass moves to the other mode.
void apply_commands_to_estimator(EstimatorState& est, std::span<const ThermalModel> models,
                                 std::span<const SwitchCommand> cmds, int n_bins);

/// TCL-side decision: each TCL inside its deadband locates its bin from its
/// true state and toggles with that bin's probability. Draw for TCL i at step k uses
/// counter k * n + i of the stream, so the result is order independent.
std::vector<std::uint8_t> actuate(std::span<const TclState> states,
                                  std::span<const ThermalModel> models,
                                  std::span<const SwitchCommand> cmds, int n_bins,
                                  const rng::Stream& stream, std::uint64_t step);

}  // namespace dlcpriv
