#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dlcpriv/rng.hpp"
#include "dlcpriv/tcl.hpp"

namespace dlcpriv {

struct PopulationSpec {
  std::size_t n_tcls = 1000;
  TclParams nominal{};
  /// R, C and P_trans are drawn uniformly on nominal * (1 +/- jitter).
  double jitter_fraction = 0.1;
  double init_on_probability = 0.5;
  std::uint64_t seed = 1;
};

void validate(const PopulationSpec& spec);

/// Independent per-TCL parameters from the (seed, "population") stream.
/// Throws ConfigError if any draw breaks reachability; draws are never
/// silently repeated.
std::vector<TclParams> sample_population(const PopulationSpec& spec);

/// Temperatures uniform over each deadband, modes Bernoulli(p_on).
std::vector<TclState> sample_initial_states(std::span<const TclParams> params,
                                            double init_on_probability,
                                            const rng::Stream& stream);

}  // namespace dlcpriv
