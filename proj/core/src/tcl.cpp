#include "dlcpriv/tcl.hpp"

#include <cmath>
#include <sstream>

#include "dlcpriv/error.hpp"

namespace dlcpriv {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "TCL parameter '" << name << "' must be finite and > 0 (got " << value << ")";
    throw ConfigError(os.str());
  }
}

}  // namespace

double NoiseModel::stddev() const { return std::sqrt(variance); }

void validate(const TclParams& p) {
  require_positive(p.resistance, "resistance");
  require_positive(p.capacitance, "capacitance");
  require_positive(p.deadband, "deadband");
  require_positive(p.power_transfer, "power_transfer");
  require_positive(p.power_elec, "power_elec");
  require_positive(p.step_min, "step_min");
  if (!std::isfinite(p.theta_ambient) || !std::isfinite(p.theta_set)) {
    throw ConfigError("TCL temperatures must be finite");
  }
  // ON must pull below the floor, OFF must push above the ceiling.
  if (!(p.theta_ambient - p.theta_gain() < p.band_floor())) {
    std::ostringstream os;
    os << "TCL cannot reach its deadband floor: theta_a - R*P_trans = "
       << p.theta_ambient - p.theta_gain() << " >= " << p.band_floor();
    throw ConfigError(os.str());
  }
  if (!(p.band_ceiling() < p.theta_ambient)) {
    std::ostringstream os;
    os << "TCL cannot reach its deadband ceiling: theta_a = " << p.theta_ambient
       << " <= " << p.band_ceiling();
    throw ConfigError(os.str());
  }
}

void validate(const NoiseModel& noise) {
  if (!(noise.variance >= 0.0) || !std::isfinite(noise.variance)) {
    throw ConfigError("noise variance must be finite and >= 0");
  }
}

double compute_a(const TclParams& params) {
  const double rc = params.resistance * params.capacitance;
  if (!(rc > 0.0)) throw ConfigError("R*C must be positive");
  return std::exp(-(params.step_min / 60.0) / rc);
}

Mode hysteresis_next_mode(const TclParams& params, double theta_next, Mode current) noexcept {
  if (theta_next < params.band_floor()) return Mode::Off;
  if (theta_next > params.band_ceiling()) return Mode::On;
  return current;
}

ThermalModel::ThermalModel(const TclParams& params)
    : params_(params), a_(0.0), theta_gain_(params.theta_gain()) {
  validate(params_);
  a_ = compute_a(params_);
}

TclState step_thermal(const TclParams& params, TclState state, double eps, bool forced_toggle) {
  return ThermalModel(params).step(state, eps, forced_toggle);
}

DriftRates on_off_drift_rates(const TclParams& params) {
  const double a = compute_a(params);
  DriftRates d{};
  d.off = (1.0 - a) * (params.theta_ambient - params.theta_set);
  d.on = (1.0 - a) * (params.theta_ambient - params.theta_gain() - params.theta_set);
  if (!(d.on < 0.0) || !(d.off > 0.0)) {
    throw ConfigError("TCL does not cycle around its setpoint");
  }
  d.duty_cycle = d.off / (d.off + std::abs(d.on));
  return d;
}

double deadband_excursion(const TclParams& params, double theta) noexcept {
  if (theta > params.band_ceiling()) return theta - params.band_ceiling();
  if (theta < params.band_floor()) return params.band_floor() - theta;
  return 0.0;
}

}  // namespace dlcpriv
