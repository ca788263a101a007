#include "dlcpriv/controller.hpp"

#include <algorithm>
#include <cmath>

#include "dlcpriv/error.hpp"

namespace dlcpriv {

void validate(const ControllerConfig& cfg) {
  if (cfg.n_bins < 2 || cfg.n_bins % 2 != 0) {
    throw ConfigError("controller.n_bins must be an even number >= 2");
  }
  if (!(cfg.command_period_min >= 0.0)) {
    throw ConfigError("controller.command_period_min must be >= 0");
  }
  if (!(cfg.deadzone_kw >= 0.0)) throw ConfigError("controller.deadzone_kw must be >= 0");
}

bool inside_deadband(const TclParams& params, double theta) noexcept {
  return theta >= params.band_floor() && theta <= params.band_ceiling();
}

double normalized_position(const TclParams& params, double theta) noexcept {
  const double x = (theta - params.band_floor()) / params.deadband;
  return std::clamp(x, 0.0, 1.0);
}

int assign_bin(double x, Mode mode, int n_bins) noexcept {
  const int half = n_bins / 2;
  const int slot = std::min(static_cast<int>(std::floor(x * half)), half - 1);
  if (mode == Mode::Off) return slot;
  return half + (half - 1 - slot);
}

EstimatorState make_estimator(std::span<const TclState> states) {
  EstimatorState est;
  ingest_measurements(est, states);
  return est;
}

double estimated_power_kw(const EstimatorState& est, std::span<const ThermalModel> models) {
  double total = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    total += models[i].params().power_elec * est.on_fraction[i];
  }
  return total;
}

void estimator_predict(EstimatorState& est, std::span<const ThermalModel> models) {
  for (std::size_t i = 0; i < est.size(); ++i) {
    const ThermalModel& model = models[i];
    const double m = est.on_fraction[i];
    const double theta = est.theta[i];
    if (m == 0.0 || m == 1.0) {
      const TclState next = model.step({theta, m == 1.0 ? Mode::On : Mode::Off}, 0.0, false);
      est.theta[i] = next.theta;
      est.on_fraction[i] = on_weight(next.mode);
      continue;
    }
    const double theta_on = model.advance(theta, 1.0, 0.0);
    const double theta_off = model.advance(theta, 0.0, 0.0);
    const double on_next = on_weight(hysteresis_next_mode(model.params(), theta_on, Mode::On));
    const double off_next = on_weight(hysteresis_next_mode(model.params(), theta_off, Mode::Off));
    est.theta[i] = m * theta_on + (1.0 - m) * theta_off;
    est.on_fraction[i] = m * on_next + (1.0 - m) * off_next;
  }
}

void ingest_measurements(EstimatorState& est, std::span<const TclState> observed) {
  if (!est.theta.empty() && est.size() != observed.size()) {
    throw ConfigError("measurement snapshot size does not match the estimator");
  }
  est.theta.resize(observed.size());
  est.on_fraction.resize(observed.size());
  for (std::size_t i = 0; i < observed.size(); ++i) {
    est.theta[i] = observed[i].theta;
    est.on_fraction[i] = on_weight(observed[i].mode);
  }
}

std::vector<SwitchCommand> compute_commands(const EstimatorState& est,
                                            std::span<const ThermalModel> models,
                                            const ControllerConfig& cfg,
                                            double p_des_kw) {
  const double mismatch = p_des_kw - estimated_power_kw(est, models);
  std::vector<SwitchCommand> cmds;
  if (std::abs(mismatch) < cfg.deadzone_kw || mismatch == 0.0) return cmds;

  const int n_bins = cfg.n_bins;
  const bool turn_on = mismatch > 0.0;
  const Mode source = turn_on ? Mode::Off : Mode::On;

  std::vector<double> switchable(static_cast<std::size_t>(n_bins), 0.0);
  for (std::size_t i = 0; i < est.size(); ++i) {
    const TclParams& p = models[i].params();
    const double mass = turn_on ? 1.0 - est.on_fraction[i] : est.on_fraction[i];
    if (mass <= 0.0 || !inside_deadband(p, est.theta[i])) continue;
    const int bin = assign_bin(normalized_position(p, est.theta[i]), source, n_bins);
    switchable[static_cast<std::size_t>(bin)] += p.power_elec * mass;
  }

  // Both walks start at the bin nearest its natural switch: the warmest OFF
  // bin (half-1) or the coolest ON bin (n-1), then move away from it.
  const int half = n_bins / 2;
  const int first = turn_on ? half - 1 : n_bins - 1;
  const int last = turn_on ? 0 : half;
  double remaining = std::abs(mismatch);
  for (int bin = first; bin >= last && remaining > 0.0; --bin) {
    const double w = switchable[static_cast<std::size_t>(bin)];
    if (w <= 0.0) continue;
    if (w <= remaining) {
      cmds.push_back({bin, 1.0});
      remaining -= w;
    } else {
      cmds.push_back({bin, remaining / w});
      remaining = 0.0;
    }
  }
  return cmds;
}

std::vector<double> bin_fractions(std::span<const SwitchCommand> cmds, int n_bins) {
  std::vector<double> out(static_cast<std::size_t>(n_bins), 0.0);
  for (const SwitchCommand& c : cmds) {
    if (c.bin < 0 || c.bin >= n_bins) throw ConfigError("switch command bin out of range");
    out[static_cast<std::size_t>(c.bin)] = std::clamp(c.fraction, 0.0, 1.0);
  }
  return out;
}

void apply_commands_to_estimator(EstimatorState& est, std::span<const ThermalModel> models,
                                 std::span<const SwitchCommand> cmds, int n_bins) {
  if (cmds.empty()) return;
  const std::vector<double> frac = bin_fractions(cmds, n_bins);
  for (std::size_t i = 0; i < est.size(); ++i) {
    if (!inside_deadband(models[i].params(), est.theta[i])) continue;
    const double x = normalized_position(models[i].params(), est.theta[i]);
    const double m = est.on_fraction[i];
    const double c_on = frac[static_cast<std::size_t>(assign_bin(x, Mode::Off, n_bins))];
    const double c_off = frac[static_cast<std::size_t>(assign_bin(x, Mode::On, n_bins))];
    // Only one walk direction is ever commanded per round, so at most one
    // of these is non-zero.
    if (c_on > 0.0) est.on_fraction[i] = m + c_on * (1.0 - m);
    if (c_off > 0.0) est.on_fraction[i] = m - c_off * m;
  }
}

std::vector<std::uint8_t> actuate(std::span<const TclState> states,
                                  std::span<const ThermalModel> models,
                                  std::span<const SwitchCommand> cmds, int n_bins,
                                  const rng::Stream& stream, std::uint64_t step) {
  std::vector<std::uint8_t> toggles(states.size(), 0);
  if (cmds.empty()) return toggles;
  const std::vector<double> frac = bin_fractions(cmds, n_bins);
  const std::uint64_t base = step * static_cast<std::uint64_t>(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const TclState& s = states[i];
    if (!inside_deadband(models[i].params(), s.theta)) continue;
    const int bin = assign_bin(normalized_position(models[i].params(), s.theta), s.mode, n_bins);
    const double c = frac[static_cast<std::size_t>(bin)];
    if (c > 0.0 && stream.uniform(base + i) < c) toggles[i] = 1;
  }
  return toggles;
}

}  // namespace dlcpriv
