#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlcpriv/rng.hpp"

namespace dlcpriv::privacy {

/// Prior over a finite set of private types (r >= 2).
struct TypePrior {
  std::vector<std::string> labels;
  std::vector<double> probs;    ///< normalised
  std::vector<double> weights;  ///< as supplied (e.g. household counts)

  std::size_t size() const noexcept { return probs.size(); }
};

/// Normalises non-negative weights; throws ConfigError on r < 2, negative
/// or all-zero weights, or a label/weight count mismatch.
TypePrior make_prior(std::vector<std::string> labels, std::span<const double> weights);

struct LogNormalComponent {
  double weight = 1.0;
  double mu = 0.0;     ///< location of ln y
  double sigma = 1.0;  ///< scale of ln y
};

/// Per-sample law of y given the type: a finite mixture of log-normals,
/// i.e. the usage layer integrated out over a finite support. One component
/// per type is the point-mass case.
struct TypeDistribution {
  std::vector<LogNormalComponent> components;
};

struct ObservationFamily {
  std::vector<TypeDistribution> types;

  std::size_t size() const noexcept { return types.size(); }
  bool point_mass() const noexcept;
  /// The common sigma when every component of every type shares it.
  std::optional<double> shared_scale() const noexcept;
  /// Per-type locations; requires point_mass().
  std::vector<double> locations() const;
};

ObservationFamily point_mass_family(std::span<const double> mu, double sigma);

void validate(const ObservationFamily& family, std::size_t n_types);

/// Dense r x r matrix, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

enum class Method : std::uint8_t { MapExact, MapMonteCarlo, LeCamExactTv, LeCamPinsker, Fano };
inline constexpr std::size_t kMethodCount = 5;

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

/// An inferential-privacy level alpha (every estimator errs with at least
/// this probability) plus how it was obtained.
struct BoundResult {
  double alpha = 0.0;
  Method method = Method::MapExact;
  double unclamped = 0.0;           ///< Fano before clamping to [0, 1]
  std::optional<double> std_error;  ///< Monte Carlo only
  std::size_t n_mc = 0;
  SquareMatrix divergence;  ///< pairwise TV (Le Cam) or KL (Fano), nats
  std::optional<std::pair<std::size_t, std::size_t>> argmax_pair;
  /// Fano's bound presumes a uniform prior; set when the scenario's is not.
  bool nonuniform_prior = false;
};

/// KL between ln N(mu_i, sigma^2) and ln N(mu_j, sigma^2), in nats.
double kl_lognormal_shared_scale(double mu_i, double mu_j, double sigma);
/// KL of T i.i.d. copies.
double kl_iid(double kl_per_sample, std::size_t samples) noexcept;
/// min(1, sqrt(kl / 2)).
double tv_pinsker(double kl) noexcept;
/// Exact TV between T-sample products of equal-scale log-normals, through
/// the sufficient statistic sum(ln y): 2 Phi(sqrt(T) |dmu| / (2 sigma)) - 1.
double tv_exact_shared_scale(double mu_i, double mu_j, double sigma, std::size_t samples);

/// Pairwise divergence matrices for a point-mass shared-scale family over
/// T samples.
SquareMatrix kl_matrix_shared_scale(std::span<const double> mu, double sigma, std::size_t samples);
SquareMatrix tv_matrix_shared_scale(std::span<const double> mu, double sigma, std::size_t samples);
SquareMatrix tv_matrix_pinsker(const SquareMatrix& kl);

/// max_{i != j} min(pi_i, pi_j) * (1 - TV_ij).
BoundResult lecam_bound(const TypePrior& prior, const SquareMatrix& tv,
                        Method tag = Method::LeCamExactTv);

/// [ln r - (1/r^2) sum_{i,j} KL_ij - ln 2] / ln(r - 1), clamped to [0, 1].
/// Throws UnsupportedError for r = 2.
BoundResult fano_bound(const SquareMatrix& kl);

/// Log-domain MAP classifier. Precomputes log priors and mixture log
/// weights; classify() does not allocate.
class MapClassifier {
 public:
  MapClassifier(const TypePrior& prior, const ObservationFamily& family);

  /// argmax_i ln pi_i + ln p(y | i); ties go to the lowest index. For a
  /// mixture, p(y | i) = sum_j w_j prod_t lnN(y_t; mu_j, sigma_j).
  /// Throws ConfigError on a non-positive sample.
  std::size_t classify(std::span<const double> y);

  /// Per-type log posterior scores (up to a shared constant) for y.
  std::vector<double> scores(std::span<const double> y);

 private:
  struct Component {
    double log_weight;
    double mu;
    double inv_two_var;
    double log_norm;  ///< -ln sigma - ln sqrt(2 pi)
  };
  void load(std::span<const double> y);
  double score(std::size_t type);

  std::vector<double> log_prior_;
  std::vector<std::vector<Component>> types_;
  std::vector<double> scratch_;
  std::vector<double> log_y_;
};

std::size_t map_classify(const TypePrior& prior, const ObservationFamily& family,
                         std::span<const double> y);

/// Closed-form Bayes error for a point-mass shared-scale family. The MAP
/// rule thresholds S = sum ln y_t ~ N(T mu_i, T sigma^2); types whose
/// decision interval is empty never get chosen and contribute their whole
/// prior mass to the error. Any ordering of mu is accepted.
BoundResult map_error_exact_shared_scale(const TypePrior& prior, std::span<const double> mu,
                                         double sigma, std::size_t samples);

struct MonteCarloOptions {
  std::size_t n_mc = 100000;
  std::uint64_t seed = 1;
  int threads = 0;  ///< 0: scheduler default
};

/// Empirical MAP error over n_mc draws (theta, component, T log-normal
/// samples), with binomial standard error. Work is split into fixed-size
/// chunks with their own substreams, so the estimate does not depend on the
/// thread count.
BoundResult map_error_monte_carlo(const TypePrior& prior, const ObservationFamily& family,
                                  std::size_t samples, const MonteCarloOptions& options,
                                  std::uint64_t substream = 0);

// ---------------------------------------------------------------------------
// Scenarios

enum class ScalingRule : std::uint8_t { LocationShift, ExplicitTable };

/// Per-sample locations for one sampling period (one entry per type).
struct PeriodParameters {
  double period_min = 0.0;
  std::vector<double> mu;
  double sigma = 0.0;
};

struct PrivacyScenario {
  std::string name;
  TypePrior prior;
  ObservationFamily family;  ///< at the reference (annual) scale
  double window_min = 60.0;
  double reference_period_min = 525600.0;  ///< 365 days
  ScalingRule rule = ScalingRule::LocationShift;
  std::vector<PeriodParameters> table;  ///< used by ExplicitTable
};

void validate(const PrivacyScenario& scenario);

struct ScaledFamily {
  ObservationFamily family;
  std::size_t samples = 0;  ///< floor(W / h)
};

/// Location shift: mu <- mu - ln(reference / h), sigma unchanged (the law of
/// X / c for log-normal X). Explicit table: the row for h, or ConfigError.
ScaledFamily scale_parameters(const PrivacyScenario& scenario, double h_min);

struct MethodSet {
  std::array<bool, kMethodCount> enabled{true, false, true, true, true};

  bool contains(Method m) const noexcept { return enabled[static_cast<std::size_t>(m)]; }
  void set(Method m, bool on) noexcept { enabled[static_cast<std::size_t>(m)] = on; }
  static MethodSet all() noexcept;
};

struct PrivacyRow {
  double h_min = 0.0;
  std::size_t samples = 0;
  std::array<std::optional<BoundResult>, kMethodCount> results;
  std::vector<std::string> warnings;

  const std::optional<BoundResult>& get(Method m) const noexcept {
    return results[static_cast<std::size_t>(m)];
  }
};

/// Every enabled method at every h (ascending). Method/family combinations
/// without a closed form are left empty with a warning.
std::vector<PrivacyRow> privacy_sweep(const PrivacyScenario& scenario, std::span<const double> h_list,
                                      const MethodSet& methods, const MonteCarloOptions& mc);

/// Per-group mean of ln x and the pooled standard deviation of the
/// group-centred logs with denominator (n - r).
struct LogNormalFit {
  std::vector<double> mu;
  double sigma = 0.0;
};

LogNormalFit fit_lognormal_shared_scale(const std::vector<std::vector<double>>& groups);

/// The bundled income example: household counts 23.7 / 48.7 / 41.2 million,
/// annual log-normal fits mu = (8.88, 9.06, 9.31), sigma = 0.49, per-minute
/// and hourly parameter rows, one-hour window, explicit-table scaling.
PrivacyScenario recs_income_scenario();

}  // namespace dlcpriv::privacy
