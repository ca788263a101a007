#include <gtest/gtest.h>

#include "dlcpriv/error.hpp"
#include "dlcpriv/population.hpp"

using namespace dlcpriv;

TEST(Population, CountAndRanges) {
  PopulationSpec spec;
  const auto pop = sample_population(spec);
  ASSERT_EQ(pop.size(), 1000u);
  for (const TclParams& p : pop) {
    EXPECT_GE(p.resistance, 1.8);
    EXPECT_LT(p.resistance, 2.2);
    EXPECT_GE(p.capacitance, 9.0);
    EXPECT_LT(p.capacitance, 11.0);
    EXPECT_GE(p.power_transfer, 10.8);
    EXPECT_LT(p.power_transfer, 13.2);
    EXPECT_EQ(p.power_elec, 2.5);
    EXPECT_EQ(p.theta_set, 20.0);
  }
}

TEST(Population, ZeroJitterIsUniform) {
  PopulationSpec spec;
  spec.n_tcls = 50;
  spec.jitter_fraction = 0.0;
  for (const TclParams& p : sample_population(spec)) EXPECT_EQ(p, spec.nominal);
}

TEST(Population, SeedDeterminism) {
  PopulationSpec spec;
  spec.n_tcls = 100;
  spec.seed = 99;
  EXPECT_EQ(sample_population(spec), sample_population(spec));
  PopulationSpec other = spec;
  other.seed = 100;
  EXPECT_NE(sample_population(spec), sample_population(other));
}

TEST(Population, InfeasibleDrawIsReported) {
  PopulationSpec spec;
  spec.nominal.power_transfer = 6.5;  // theta_g 13, ON fixed point 19 sits just below the floor
  spec.jitter_fraction = 0.3;
  EXPECT_THROW(sample_population(spec), ConfigError);
}

TEST(Population, BadSpec) {
  PopulationSpec spec;
  spec.n_tcls = 0;
  EXPECT_THROW(validate(spec), ConfigError);
  spec = {};
  spec.init_on_probability = 1.5;
  EXPECT_THROW(validate(spec), ConfigError);
}

TEST(Population, InitialStates) {
  PopulationSpec spec;
  const auto pop = sample_population(spec);
  const auto states = sample_initial_states(pop, 0.5, rng::Stream(5, rng::labels::kInitialStates));
  std::size_t on = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    EXPECT_GE(states[i].theta, pop[i].band_floor());
    EXPECT_LE(states[i].theta, pop[i].band_ceiling());
    on += states[i].mode == Mode::On;
  }
  // Binomial(1000, 0.5), 4 sigma
  EXPECT_NEAR(static_cast<double>(on), 500.0, 4.0 * 15.82);
  const auto all_on = sample_initial_states(pop, 1.0, rng::Stream(5, rng::labels::kInitialStates));
  for (const auto& s : all_on) EXPECT_EQ(s.mode, Mode::On);
}
