#include "dlcpriv/population.hpp"

#include <cmath>
#include <sstream>

#include "dlcpriv/error.hpp"

namespace dlcpriv {

void validate(const PopulationSpec& spec) {
  if (spec.n_tcls < 1) throw ConfigError("population.n_tcls must be >= 1");
  if (!(spec.jitter_fraction >= 0.0 && spec.jitter_fraction < 0.5)) {
    throw ConfigError("population.jitter_fraction must lie in [0, 0.5)");
  }
  if (!(spec.init_on_probability >= 0.0 && spec.init_on_probability <= 1.0)) {
    throw ConfigError("population.init_on_probability must lie in [0, 1]");
  }
  validate(spec.nominal);
}

std::vector<TclParams> sample_population(const PopulationSpec& spec) {
  validate(spec);
  rng::Cursor draw(rng::Stream(spec.seed, rng::labels::kPopulation));
  const double j = spec.jitter_fraction;

  std::vector<TclParams> out;
  out.reserve(spec.n_tcls);
  for (std::size_t i = 0; i < spec.n_tcls; ++i) {
    TclParams p = spec.nominal;
    p.resistance = spec.nominal.resistance * draw.uniform(1.0 - j, 1.0 + j);
    p.capacitance = spec.nominal.capacitance * draw.uniform(1.0 - j, 1.0 + j);
    p.power_transfer = spec.nominal.power_transfer * draw.uniform(1.0 - j, 1.0 + j);
    try {
      validate(p);
    } catch (const ConfigError& e) {
      std::ostringstream os;
      os << "population draw " << i << " is infeasible (" << e.what()
         << "); reduce jitter_fraction or adjust the nominal TCL";
      throw ConfigError(os.str());
    }
    out.push_back(p);
  }
  return out;
}

std::vector<TclState> sample_initial_states(std::span<const TclParams> params,
                                            double init_on_probability,
                                            const rng::Stream& stream) {
  std::vector<TclState> out;
  out.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const TclParams& p = params[i];
    const double theta = stream.uniform(2 * i, p.band_floor(), p.band_ceiling());
    const Mode m = stream.bernoulli(2 * i + 1, init_on_probability) ? Mode::On : Mode::Off;
    out.push_back({theta, m});
  }
  return out;
}

}  // namespace dlcpriv
