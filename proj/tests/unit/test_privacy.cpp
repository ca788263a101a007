#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dlcpriv/error.hpp"
#include "dlcpriv/privacy.hpp"
#include "oracles.hpp"

using namespace dlcpriv;
using namespace dlcpriv::privacy;

namespace {

TypePrior prior_of(const std::vector<double>& w) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < w.size(); ++i) labels.push_back("t" + std::to_string(i));
  return make_prior(labels, w);
}

const std::vector<double> kHourlyMu{0.82, 0.99, 1.26};
const std::vector<double> kHouseholds{23.7, 48.7, 41.2};

}  // namespace

TEST(Prior, Normalises) {
  const TypePrior p = prior_of(kHouseholds);
  EXPECT_NEAR(p.probs[0], 23.7 / 113.6, 1e-15);
  EXPECT_NEAR(p.probs[0], 0.20863, 5e-6);
  EXPECT_NEAR(p.probs[1], 0.42870, 5e-6);
  EXPECT_NEAR(p.probs[2], 0.36268, 5e-6);
  EXPECT_THROW(prior_of({1.0}), ConfigError);
  EXPECT_THROW(prior_of({1.0, -1.0}), ConfigError);
  EXPECT_THROW(prior_of({0.0, 0.0}), ConfigError);
}

TEST(Divergence, KlClosedForm) {
  EXPECT_EQ(kl_lognormal_shared_scale(1.0, 1.0, 0.3), 0.0);
  EXPECT_NEAR(kl_lognormal_shared_scale(0.82, 0.99, 0.49), 0.17 * 0.17 / (2 * 0.49 * 0.49), 1e-15);
  EXPECT_NEAR(kl_iid(0.1, 7), 0.7, 1e-15);
  EXPECT_THROW(kl_lognormal_shared_scale(0, 1, 0.0), ConfigError);
}

TEST(Divergence, ExactTvAgainstQuadrature) {
  EXPECT_NEAR(tv_exact_shared_scale(0.82, 0.99, 0.49, 1), oracle::tv_quadrature(0.82, 0.99, 0.49), 1e-9);
  EXPECT_NEAR(tv_exact_shared_scale(0.82, 0.99, 0.49, 1), 0.137718, 1e-6);
  EXPECT_NEAR(tv_exact_shared_scale(1.0, 1.3, 0.5, 9),
              oracle::tv_quadrature(9.0, 9 * 1.3, 0.5 * 3.0), 1e-9);
  EXPECT_EQ(tv_exact_shared_scale(1.0, 1.0, 0.5, 4), 0.0);
  EXPECT_EQ(tv_exact_shared_scale(1.0, 2.0, 0.5, 0), 0.0);
}

TEST(Divergence, PinskerDominatesExactTv) {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> mu(-3.0, 3.0), sig(0.05, 2.0);
  std::uniform_int_distribution<int> T(1, 200);
  for (int n = 0; n < 10000; ++n) {
    const double a = mu(gen), b = mu(gen), s = sig(gen);
    const auto t = static_cast<std::size_t>(T(gen));
    const double tv = tv_exact_shared_scale(a, b, s, t);
    const double bound = tv_pinsker(kl_iid(kl_lognormal_shared_scale(a, b, s), t));
    ASSERT_LE(tv, bound + 1e-12) << a << " " << b << " " << s << " " << t;
  }
  EXPECT_EQ(tv_pinsker(10.0), 1.0);
}

TEST(LeCam, TwoUniformTypes) {
  const TypePrior p = prior_of({1, 1});
  const std::vector<double> mu{0.0, 1.0};
  const auto tv = tv_matrix_shared_scale(mu, 1.0, 1);
  const BoundResult r = lecam_bound(p, tv);
  EXPECT_NEAR(r.alpha, 0.5 * (1.0 - std::erf(0.5 / std::sqrt(2.0))), 1e-12);
  ASSERT_TRUE(r.argmax_pair);
}

TEST(LeCam, RecsHourlyPinsker) {
  const TypePrior p = prior_of(kHouseholds);
  const auto kl = kl_matrix_shared_scale(kHourlyMu, 0.49, 1);
  const BoundResult r = lecam_bound(p, tv_matrix_pinsker(kl), Method::LeCamPinsker);
  EXPECT_NEAR(r.alpha, oracle::lecam_pinsker(p.probs, kHourlyMu, 0.49, 1), 1e-12);
  EXPECT_NEAR(r.alpha, 0.2628, 5e-4);
  EXPECT_EQ(r.argmax_pair, std::make_pair(std::size_t{1}, std::size_t{2}));
}

TEST(Fano, RecsHourly) {
  const auto kl = kl_matrix_shared_scale(kHourlyMu, 0.49, 1);
  const BoundResult r = fano_bound(kl);
  EXPECT_NEAR(r.alpha, oracle::fano_unclamped(kHourlyMu, 0.49, 1), 1e-12);
  EXPECT_NEAR(r.alpha, 0.3878, 5e-4);
}

TEST(Fano, ClampsAndRejectsBinary) {
  const std::vector<double> far{0.0, 10.0, 20.0};
  const BoundResult r = fano_bound(kl_matrix_shared_scale(far, 0.1, 5));
  EXPECT_EQ(r.alpha, 0.0);
  EXPECT_LT(r.unclamped, 0.0);
  const std::vector<double> two{0.0, 1.0};
  EXPECT_THROW(fano_bound(kl_matrix_shared_scale(two, 1.0, 1)), UnsupportedError);
}

TEST(MapExact, AgainstQuadrature) {
  struct Case {
    std::vector<double> w, mu;
    double sigma;
    std::size_t T;
  };
  const std::vector<Case> cases{
      {kHouseholds, kHourlyMu, 0.49, 1},
      {kHouseholds, {0.014, 0.016, 0.017}, 0.49, 60},
      {{1, 1}, {0.0, 1.0}, 1.0, 1},
      {{0.7, 0.2, 0.1}, {0.0, 0.3, 0.31}, 0.4, 5},
      {{0.1, 0.8, 0.1}, {0.0, 0.1, 0.2}, 0.5, 3},   // middle type dominates
      {{0.3, 0.3, 0.4}, {1.0, 1.0, 2.0}, 0.8, 2},   // tied locations
      {{0.25, 0.25, 0.25, 0.25}, {2.0, -1.0, 0.5, 0.0}, 0.6, 12},
  };
  for (const Case& c : cases) {
    const TypePrior p = prior_of(c.w);
    const double got = map_error_exact_shared_scale(p, c.mu, c.sigma, c.T).alpha;
    EXPECT_NEAR(got, oracle::map_error_quadrature(p.probs, c.mu, c.sigma, c.T), 1e-8);
  }
}

TEST(MapExact, TwoTypesEqualPriors) {
  const TypePrior p = prior_of({1, 1});
  const std::vector<double> mu{0.2, 0.7};
  const double got = map_error_exact_shared_scale(p, mu, 0.5, 4).alpha;
  EXPECT_NEAR(got, 0.5 * std::erfc(0.5 * 2.0 / (2 * 0.5) / std::sqrt(2.0)), 1e-12);
}

TEST(MapExact, NoSamples) {
  const TypePrior p = prior_of(kHouseholds);
  EXPECT_NEAR(map_error_exact_shared_scale(p, kHourlyMu, 0.49, 0).alpha, 1.0 - 48.7 / 113.6, 1e-15);
}

TEST(MapMonteCarlo, AgreesWithExact) {
  const TypePrior p = prior_of(kHouseholds);
  const auto fam = point_mass_family(kHourlyMu, 0.49);
  MonteCarloOptions o;
  o.n_mc = 200000;
  o.seed = 3;
  for (std::size_t T : {1u, 4u}) {
    const BoundResult mc = map_error_monte_carlo(p, fam, T, o);
    const double exact = map_error_exact_shared_scale(p, kHourlyMu, 0.49, T).alpha;
    ASSERT_TRUE(mc.std_error);
    EXPECT_NEAR(mc.alpha, exact, 4.0 * *mc.std_error);
    EXPECT_EQ(mc.n_mc, o.n_mc);
  }
}

TEST(MapMonteCarlo, ThreadInvariant) {
  const TypePrior p = prior_of({1, 2, 3});
  const auto fam = point_mass_family(std::vector<double>{0.0, 0.2, 0.5}, 0.3);
  MonteCarloOptions o;
  o.n_mc = 100000;
  o.threads = 1;
  const double a = map_error_monte_carlo(p, fam, 3, o).alpha;
  o.threads = 3;
  EXPECT_EQ(a, map_error_monte_carlo(p, fam, 3, o).alpha);
}

TEST(MapMonteCarlo, NoSamplesIsExact) {
  const TypePrior p = prior_of({1, 3});
  const auto fam = point_mass_family(std::vector<double>{0.0, 1.0}, 1.0);
  const BoundResult r = map_error_monte_carlo(p, fam, 0, MonteCarloOptions{});
  EXPECT_DOUBLE_EQ(r.alpha, 0.25);
  EXPECT_EQ(r.std_error.value_or(-1.0), 0.0);
}

TEST(MapClassifier, Thresholds) {
  const TypePrior p = prior_of({1, 1});
  const auto fam = point_mass_family(std::vector<double>{0.0, 1.0}, 1.0);
  // equal priors, equal scales: boundary at ln y = 0.5
  EXPECT_EQ(map_classify(p, fam, std::vector<double>{std::exp(0.49)}), 0u);
  EXPECT_EQ(map_classify(p, fam, std::vector<double>{std::exp(0.51)}), 1u);
  EXPECT_THROW(map_classify(p, fam, std::vector<double>{0.0}), ConfigError);
}

TEST(MapClassifier, MixtureScoresWholeVector) {
  // Type 0 is an even mixture of locations -2 and 2; type 1 sits at 0.
  ObservationFamily fam;
  fam.types.push_back({{{0.5, -2.0, 0.5}, {0.5, 2.0, 0.5}}});
  fam.types.push_back({{{1.0, 0.0, 0.5}}});
  const TypePrior p = prior_of({1, 1});
  MapClassifier clf(p, fam);
  const std::vector<double> y{std::exp(2.0), std::exp(2.1), std::exp(1.9)};
  EXPECT_EQ(clf.classify(y), 0u);
  const auto s = clf.scores(y);
  // direct evaluation of log sum_j w_j prod_t N(ln y_t; mu_j, 0.5)
  auto comp = [&](double m) {
    double acc = 0.0;
    for (double v : y) {
      const double z = (std::log(v) - m) / 0.5;
      acc += -0.5 * z * z - std::log(0.5 * std::sqrt(2 * M_PI)) - std::log(v);
    }
    return acc;
  };
  const double l0 = std::log(0.5 * std::exp(comp(-2.0)) + 0.5 * std::exp(comp(2.0)));
  const double l1 = comp(0.0);
  EXPECT_NEAR(s[0] - s[1], l0 - l1, 1e-9);
}

TEST(Fit, PooledScale) {
  const std::vector<std::vector<double>> groups{{std::exp(1.0), std::exp(3.0)},
                                                {std::exp(4.0), std::exp(6.0)}};
  const LogNormalFit f = fit_lognormal_shared_scale(groups);
  EXPECT_NEAR(f.mu[0], 2.0, 1e-12);
  EXPECT_NEAR(f.mu[1], 5.0, 1e-12);
  EXPECT_NEAR(f.sigma, std::sqrt(2.0), 1e-12);
}

TEST(Scenario, LocationShift) {
  PrivacyScenario s = recs_income_scenario();
  s.rule = ScalingRule::LocationShift;
  const ScaledFamily f = scale_parameters(s, 15.0);
  EXPECT_EQ(f.samples, 4u);
  EXPECT_NEAR(f.family.types[0].components[0].mu, 8.88 - std::log(525600.0 / 15.0), 1e-12);
  EXPECT_EQ(f.family.types[0].components[0].sigma, 0.49);
  EXPECT_EQ(scale_parameters(s, 7.0).samples, 8u);
  EXPECT_EQ(scale_parameters(s, 90.0).samples, 0u);
}

TEST(Scenario, ExplicitTable) {
  const PrivacyScenario s = recs_income_scenario();
  const ScaledFamily f = scale_parameters(s, 60.0);
  EXPECT_EQ(f.samples, 1u);
  EXPECT_EQ(f.family.locations(), kHourlyMu);
  EXPECT_EQ(scale_parameters(s, 1.0).samples, 60u);
  EXPECT_THROW(scale_parameters(s, 5.0), ConfigError);
}

TEST(Sweep, RowsAndWarnings) {
  const PrivacyScenario s = recs_income_scenario();
  const std::vector<double> h{60.0, 1.0};
  const auto rows = privacy_sweep(s, h, MethodSet::all(), MonteCarloOptions{20000, 1, 0});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].h_min, 1.0);
  for (const auto& row : rows) {
    for (const auto& r : row.results) {
      ASSERT_TRUE(r);
      EXPECT_GE(r->alpha, 0.0);
      EXPECT_LE(r->alpha, 1.0);
    }
    EXPECT_TRUE(row.get(Method::Fano)->nonuniform_prior);
    EXPECT_LE(row.get(Method::LeCamPinsker)->alpha, row.get(Method::MapExact)->alpha);
  }

  // Mixtures have no closed form: the exact cells stay empty, MC still runs.
  PrivacyScenario mix = s;
  mix.rule = ScalingRule::LocationShift;
  mix.family.types[0].components = {{0.5, 8.8, 0.49}, {0.5, 8.96, 0.49}};
  const std::vector<double> one{60.0};
  const auto mrows = privacy_sweep(mix, one, MethodSet::all(), MonteCarloOptions{5000, 1, 0});
  EXPECT_FALSE(mrows[0].get(Method::MapExact));
  EXPECT_FALSE(mrows[0].get(Method::Fano));
  EXPECT_TRUE(mrows[0].get(Method::MapMonteCarlo));
  EXPECT_FALSE(mrows[0].warnings.empty());
}

TEST(Methods, Names) {
  for (std::size_t m = 0; m < kMethodCount; ++m) {
    EXPECT_EQ(parse_method(to_string(static_cast<Method>(m))), static_cast<Method>(m));
  }
  EXPECT_FALSE(parse_method("bogus"));
}
