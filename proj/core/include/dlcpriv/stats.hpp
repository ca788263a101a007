#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dlcpriv::stats {

double mean(std::span<const double> xs);
/// Standard error of the mean (sample std / sqrt(n)); 0 for n < 2.
double std_error(std::span<const double> xs);

/// Linear interpolation between order statistics: position p*(n-1) in the
/// sorted data (the "type 7" rule). `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double p);

/// Tukey box summary with whiskers at the most extreme data inside
/// [q1 - 1.5 IQR, q3 + 1.5 IQR].
struct BoxStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double lo_whisker = 0.0;
  double hi_whisker = 0.0;
  std::vector<double> outliers;  ///< ascending
};

BoxStats box_stats(std::span<const double> xs);

/// Average ranks (1-based), ties share the mean rank.
std::vector<double> ranks(std::span<const double> xs);

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

/// One-sided p-value for H1: rho > 0, large-sample normal approximation
/// z = rho * sqrt(n - 1).
double spearman_p_positive(double rho, std::size_t n);

/// Standard normal CDF and upper tail, via erfc for accuracy in the tails.
double normal_cdf(double z);
double normal_sf(double z);

}  // namespace dlcpriv::stats
