#pragma once

#include <cstdint>

namespace dlcpriv {

enum class Mode : std::uint8_t { Off = 0, On = 1 };

constexpr Mode toggled(Mode m) noexcept { return m == Mode::On ? Mode::Off : Mode::On; }
constexpr double on_weight(Mode m) noexcept { return m == Mode::On ? 1.0 : 0.0; }

/// Physical constants of one air-conditioning TCL.
///
/// Units: resistance in degC/kW, capacitance in kWh/degC, temperatures in
/// degC, powers in kW, step in minutes. The step is converted to hours
/// before forming the RC time constant.
struct TclParams {
  double resistance = 2.0;
  double capacitance = 10.0;
  double theta_ambient = 32.0;
  double theta_set = 20.0;
  double deadband = 0.5;
  double power_transfer = 12.0;  ///< heat moved while ON
  double power_elec = 2.5;       ///< electrical draw while ON
  double step_min = 1.0;

  double theta_gain() const noexcept { return resistance * power_transfer; }
  double band_floor() const noexcept { return theta_set - deadband / 2.0; }
  double band_ceiling() const noexcept { return theta_set + deadband / 2.0; }

  bool operator==(const TclParams&) const = default;
};

struct TclState {
  double theta = 20.0;
  Mode mode = Mode::Off;

  bool operator==(const TclState&) const = default;
};

/// Zero-mean Gaussian process noise added to every temperature update.
struct NoiseModel {
  double variance = 0.0005;  ///< degC^2 per step
  double stddev() const;
};

/// Throws ConfigError unless every positivity constraint holds and the
/// TCL can reach both deadband edges (it must duty-cycle).
void validate(const TclParams& params);
void validate(const NoiseModel& noise);

/// exp(-h / (R C)) with h in hours.
double compute_a(const TclParams& params);

/// Three-case hysteresis rule for a cooling TCL. Landing exactly on an
/// edge keeps the current mode.
Mode hysteresis_next_mode(const TclParams& params, double theta_next, Mode current) noexcept;

/// Pre-validated TCL with the decay factor cached. Most hot loops go
/// through this rather than the free functions.
class ThermalModel {
 public:
  explicit ThermalModel(const TclParams& params);

  const TclParams& params() const noexcept { return params_; }
  double a() const noexcept { return a_; }

  /// a*theta + (1-a)*(theta_a - on*theta_g) + eps, with on in [0, 1].
  double advance(double theta, double on, double eps) const noexcept {
    return a_ * theta + (1.0 - a_) * (params_.theta_ambient - on * theta_gain_) + eps;
  }

  /// Forced toggle (if any), then the thermal update, then hysteresis.
  TclState step(TclState state, double eps, bool forced_toggle) const noexcept {
    const Mode m = forced_toggle ? toggled(state.mode) : state.mode;
    const double next = advance(state.theta, on_weight(m), eps);
    return {next, hysteresis_next_mode(params_, next, m)};
  }

 private:
  TclParams params_;
  double a_;
  double theta_gain_;
};

TclState step_thermal(const TclParams& params, TclState state, double eps, bool forced_toggle);

/// Linearised per-step drift at the setpoint and the implied duty cycle.
struct DriftRates {
  double on;   ///< degC per step while ON (negative)
  double off;  ///< degC per step while OFF (positive)
  double duty_cycle;
};

DriftRates on_off_drift_rates(const TclParams& params);

/// Distance outside [floor, ceiling]; zero inside the band.
double deadband_excursion(const TclParams& params, double theta) noexcept;

}  // namespace dlcpriv
