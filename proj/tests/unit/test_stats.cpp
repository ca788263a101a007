#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dlcpriv/stats.hpp"

using namespace dlcpriv::stats;

TEST(Stats, BoxWithOutlier) {
  const std::vector<double> xs{1, 2, 3, 4, 100};
  const BoxStats b = box_stats(xs);
  EXPECT_EQ(b.n, 5u);
  EXPECT_DOUBLE_EQ(b.median, 3.0);
  EXPECT_DOUBLE_EQ(b.q1, 2.0);
  EXPECT_DOUBLE_EQ(b.q3, 4.0);
  EXPECT_DOUBLE_EQ(b.lo_whisker, 1.0);
  EXPECT_DOUBLE_EQ(b.hi_whisker, 4.0);
  ASSERT_EQ(b.outliers.size(), 1u);
  EXPECT_DOUBLE_EQ(b.outliers[0], 100.0);
  EXPECT_DOUBLE_EQ(b.mean, 22.0);
}

TEST(Stats, Type7Quantiles) {
  const std::vector<double> xs{10, 20, 30, 40};
  EXPECT_DOUBLE_EQ(quantile_sorted(xs, 0.0), 10.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(xs, 1.0), 40.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(xs, 0.25), 17.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(xs, 0.5), 25.0);
}

TEST(Stats, SingleValue) {
  const std::vector<double> xs{4.2};
  const BoxStats b = box_stats(xs);
  EXPECT_DOUBLE_EQ(b.mean, b.median);
  EXPECT_DOUBLE_EQ(b.std_error, 0.0);
  EXPECT_TRUE(b.outliers.empty());
}

TEST(Stats, StdError) {
  const std::vector<double> xs{1, 2, 3, 4};
  // sample variance 5/3
  EXPECT_NEAR(std_error(xs), std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
}

TEST(Stats, AverageRanks) {
  const std::vector<double> xs{3, 1, 3, 2};
  const auto r = ranks(xs);
  EXPECT_EQ(r, (std::vector<double>{3.5, 1, 3.5, 2}));
}

TEST(Stats, Spearman) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 4, 9, 16, 100};
  const std::vector<double> z{5, 4, 3, 2, 1};
  EXPECT_NEAR(spearman(x, y), 1.0, 1e-15);
  EXPECT_NEAR(spearman(x, z), -1.0, 1e-15);
  EXPECT_NEAR(pearson(x, x), 1.0, 1e-15);
}

TEST(Stats, SpearmanPValue) {
  EXPECT_NEAR(spearman_p_positive(0.0, 100), 0.5, 1e-15);
  // z = 0.3 * sqrt(99)
  EXPECT_NEAR(spearman_p_positive(0.3, 100), 0.5 * std::erfc(0.3 * std::sqrt(99.0) / std::sqrt(2.0)),
              1e-15);
  EXPECT_LT(spearman_p_positive(0.2, 2000), 1e-10);
}

TEST(Stats, NormalTails) {
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
  EXPECT_NEAR(normal_sf(8.0), 6.22096057427178e-16, 1e-25);
}
