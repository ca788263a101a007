#include "dlcpriv/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include "dlcpriv/error.hpp"
#include "dlcpriv/stats.hpp"

namespace dlcpriv::privacy {

namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;  // ln sqrt(2 pi)

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("log-normal scale sigma must be finite and > 0");
  }
}

double log_sum_exp(std::span<const double> xs) {
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

TypePrior make_prior(std::vector<std::string> labels, std::span<const double> weights) {
  if (weights.size() < 2) throw ConfigError("a prior needs at least two types");
  if (!labels.empty() && labels.size() != weights.size()) {
    throw ConfigError("prior labels and weights differ in length");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("prior weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("prior weights sum to zero");
  TypePrior p;
  p.weights.assign(weights.begin(), weights.end());
  p.probs.reserve(weights.size());
  for (double w : weights) p.probs.push_back(w / total);
  if (labels.empty()) {
    for (std::size_t i = 0; i < weights.size(); ++i) labels.push_back("type" + std::to_string(i));
  }
  p.labels = std::move(labels);
  return p;
}

bool ObservationFamily::point_mass() const noexcept {
  return std::all_of(types.begin(), types.end(),
                     [](const TypeDistribution& t) { return t.components.size() == 1; });
}

std::optional<double> ObservationFamily::shared_scale() const noexcept {
  std::optional<double> sigma;
  for (const TypeDistribution& t : types) {
    for (const LogNormalComponent& c : t.components) {
      if (!sigma) sigma = c.sigma;
      else if (*sigma != c.sigma) return std::nullopt;
    }
  }
  return sigma;
}

std::vector<double> ObservationFamily::locations() const {
  if (!point_mass()) throw UnsupportedError("locations() needs one component per type");
  std::vector<double> mu;
  mu.reserve(types.size());
  for (const TypeDistribution& t : types) mu.push_back(t.components.front().mu);
  return mu;
}

ObservationFamily point_mass_family(std::span<const double> mu, double sigma) {
  ObservationFamily f;
  for (double m : mu) f.types.push_back({{{1.0, m, sigma}}});
  return f;
}

void validate(const ObservationFamily& family, std::size_t n_types) {
  if (family.size() != n_types) {
    std::ostringstream os;
    os << "observation family has " << family.size() << " types but the prior has " << n_types;
    throw ConfigError(os.str());
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& comps = family.types[i].components;
    if (comps.empty()) throw ConfigError("every type needs at least one mixture component");
    double total = 0.0;
    for (const LogNormalComponent& c : comps) {
      if (!(c.weight >= 0.0)) throw ConfigError("mixture weights must be >= 0");
      if (!std::isfinite(c.mu)) throw ConfigError("mixture locations must be finite");
      require_sigma(c.sigma);
      total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      std::ostringstream os;
      os << "mixture weights of type " << i << " sum to " << total << ", expected 1";
      throw ConfigError(os.str());
    }
  }
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::MapExact: return "map-exact";
    case Method::MapMonteCarlo: return "map-mc";
    case Method::LeCamExactTv: return "lecam-exact-tv";
    case Method::LeCamPinsker: return "lecam-pinsker";
    case Method::Fano: return "fano";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kMethodCount; ++i) {
    const auto m = static_cast<Method>(i);
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

MethodSet MethodSet::all() noexcept {
  MethodSet s;
  s.enabled.fill(true);
  return s;
}

// ---------------------------------------------------------------------------
// Divergences

double kl_lognormal_shared_scale(double mu_i, double mu_j, double sigma) {
  require_sigma(sigma);
  const double d = mu_i - mu_j;
  return d * d / (2.0 * sigma * sigma);
}

double kl_iid(double kl_per_sample, std::size_t samples) noexcept {
  return static_cast<double>(samples) * kl_per_sample;
}

double tv_pinsker(double kl) noexcept { return std::min(1.0, std::sqrt(std::max(0.0, kl) / 2.0)); }

double tv_exact_shared_scale(double mu_i, double mu_j, double sigma, std::size_t samples) {
  require_sigma(sigma);
  if (samples == 0) return 0.0;
  const double z = std::sqrt(static_cast<double>(samples)) * std::abs(mu_i - mu_j) / (2.0 * sigma);
  // 2 Phi(z) - 1 = erf(z / sqrt 2)
  return std::clamp(std::erf(z / std::numbers::sqrt2), 0.0, 1.0);
}

SquareMatrix kl_matrix_shared_scale(std::span<const double> mu, double sigma, std::size_t samples) {
  SquareMatrix kl(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (i != j) kl(i, j) = kl_iid(kl_lognormal_shared_scale(mu[i], mu[j], sigma), samples);
    }
  }
  return kl;
}

SquareMatrix tv_matrix_shared_scale(std::span<const double> mu, double sigma, std::size_t samples) {
  SquareMatrix tv(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (i != j) tv(i, j) = tv_exact_shared_scale(mu[i], mu[j], sigma, samples);
    }
  }
  return tv;
}

SquareMatrix tv_matrix_pinsker(const SquareMatrix& kl) {
  SquareMatrix tv(kl.size());
  for (std::size_t i = 0; i < kl.size(); ++i) {
    for (std::size_t j = 0; j < kl.size(); ++j) {
      if (i != j) tv(i, j) = tv_pinsker(kl(i, j));
    }
  }
  return tv;
}

// ---------------------------------------------------------------------------
// Bounds

BoundResult lecam_bound(const TypePrior& prior, const SquareMatrix& tv, Method tag) {
  const std::size_t r = prior.size();
  if (r < 2) throw ConfigError("Le Cam's bound needs at least two types");
  if (tv.size() != r) throw ConfigError("TV matrix size does not match the prior");
  BoundResult out;
  out.method = tag;
  out.alpha = -1.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      const double d = std::clamp(tv(i, j), 0.0, 1.0);
      const double v = std::min(prior.probs[i], prior.probs[j]) * (1.0 - d);
      if (v > out.alpha) {
        out.alpha = v;
        out.argmax_pair = std::make_pair(i, j);
      }
    }
  }
  out.unclamped = out.alpha;
  out.divergence = tv;
  return out;
}

BoundResult fano_bound(const SquareMatrix& kl) {
  const std::size_t r = kl.size();
  if (r < 3) {
    throw UnsupportedError("Fano's bound divides by ln(r - 1) and needs at least three types");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      if (!(kl(i, j) >= 0.0)) throw ConfigError("KL divergences must be >= 0");
      total += kl(i, j);
    }
  }
  const double rd = static_cast<double>(r);
  BoundResult out;
  out.method = Method::Fano;
  out.unclamped = (std::log(rd) - total / (rd * rd) - std::numbers::ln2) / std::log(rd - 1.0);
  out.alpha = std::clamp(out.unclamped, 0.0, 1.0);
  out.divergence = kl;
  return out;
}

// ---------------------------------------------------------------------------
// MAP

MapClassifier::MapClassifier(const TypePrior& prior, const ObservationFamily& family) {
  validate(family, prior.size());
  log_prior_.reserve(prior.size());
  for (double p : prior.probs) {
    log_prior_.push_back(p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity());
  }
  std::size_t widest = 1;
  for (const TypeDistribution& t : family.types) {
    std::vector<Component> comps;
    for (const LogNormalComponent& c : t.components) {
      if (c.weight <= 0.0) continue;
      comps.push_back({std::log(c.weight), c.mu, 1.0 / (2.0 * c.sigma * c.sigma),
                       -std::log(c.sigma) - kLogSqrtTwoPi});
    }
    widest = std::max(widest, comps.size());
    types_.push_back(std::move(comps));
  }
  scratch_.resize(widest);
}

void MapClassifier::load(std::span<const double> y) {
  log_y_.resize(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    if (!(y[t] > 0.0)) throw ConfigError("log-normal observations must be strictly positive");
    log_y_[t] = std::log(y[t]);
  }
}

double MapClassifier::score(std::size_t type) {
  // Usage is drawn once per observation vector, so each component's
  // likelihood is a product over samples and the mixture is taken over
  // whole vectors. The -sum ln y Jacobian is common to all types and omitted.
  const auto& comps = types_[type];
  const double n = static_cast<double>(log_y_.size());
  for (std::size_t j = 0; j < comps.size(); ++j) {
    const Component& c = comps[j];
    double ss = 0.0;
    for (double ly : log_y_) ss += (ly - c.mu) * (ly - c.mu);
    scratch_[j] = c.log_weight + n * c.log_norm - ss * c.inv_two_var;
  }
  const double loglik = comps.size() == 1
                            ? scratch_[0]
                            : log_sum_exp(std::span<const double>(scratch_.data(), comps.size()));
  return log_prior_[type] + loglik;
}

std::vector<double> MapClassifier::scores(std::span<const double> y) {
  load(y);
  std::vector<double> out(types_.size());
  for (std::size_t i = 0; i < types_.size(); ++i) out[i] = score(i);
  return out;
}

std::size_t MapClassifier::classify(std::span<const double> y) {
  load(y);
  std::size_t best = 0;
  double best_score = score(0);
  for (std::size_t i = 1; i < types_.size(); ++i) {
    const double s = score(i);
    if (s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

std::size_t map_classify(const TypePrior& prior, const ObservationFamily& family,
                         std::span<const double> y) {
  MapClassifier c(prior, family);
  return c.classify(y);
}

BoundResult map_error_exact_shared_scale(const TypePrior& prior, std::span<const double> mu,
                                         double sigma, std::size_t samples) {
  const std::size_t r = prior.size();
  if (r < 2) throw ConfigError("MAP error needs at least two types");
  if (mu.size() != r) throw ConfigError("one location per type is required");
  require_sigma(sigma);

  BoundResult out;
  out.method = Method::MapExact;

  if (samples == 0) {
    const auto best = std::max_element(prior.probs.begin(), prior.probs.end());
    out.alpha = out.unclamped = 1.0 - *best;
    return out;
  }

  // With a shared scale the log posterior of type i is, up to terms common
  // to all types, the line ln pi_i + S mu_i / s2 - T mu_i^2 / (2 s2) in
  // S = sum ln y_t. The MAP rule picks the upper envelope of these lines.
  // The error is invariant under a common shift of mu; centring keeps the
  // intercepts small when every location sits far from zero.
  double centre = 0.0;
  for (double m : mu) centre += m;
  centre /= static_cast<double>(r);
  std::vector<double> loc(mu.begin(), mu.end());
  for (double& m : loc) m -= centre;

  const double s2 = sigma * sigma;
  const double T = static_cast<double>(samples);
  struct Line {
    std::size_t type;
    double slope;
    double intercept;
  };
  std::vector<Line> lines;
  for (std::size_t i = 0; i < r; ++i) {
    if (prior.probs[i] <= 0.0) continue;
    lines.push_back({i, loc[i] / s2, std::log(prior.probs[i]) - T * loc[i] * loc[i] / (2.0 * s2)});
  }
  std::stable_sort(lines.begin(), lines.end(),
                   [](const Line& a, const Line& b) { return a.slope < b.slope; });
  // Equal slopes: only the highest intercept (lowest index on ties) survives.
  std::vector<Line> distinct;
  for (const Line& l : lines) {
    if (!distinct.empty() && distinct.back().slope == l.slope) {
      Line& prev = distinct.back();
      if (l.intercept > prev.intercept ||
          (l.intercept == prev.intercept && l.type < prev.type)) {
        prev = l;
      }
      continue;
    }
    distinct.push_back(l);
  }
  auto crossing = [](const Line& a, const Line& b) {
    return (a.intercept - b.intercept) / (b.slope - a.slope);
  };
  std::vector<Line> hull;
  for (const Line& l : distinct) {
    while (hull.size() >= 2 &&
           crossing(hull[hull.size() - 2], l) <= crossing(hull[hull.size() - 2], hull.back())) {
      hull.pop_back();
    }
    hull.push_back(l);
  }

  const double sd = sigma * std::sqrt(T);
  double error_mass = 0.0;
  std::vector<bool> chosen(r, false);
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const std::size_t i = hull[k].type;
    chosen[i] = true;
    const double mean = T * loc[i];
    const double lo = k == 0 ? -std::numeric_limits<double>::infinity() : crossing(hull[k - 1], hull[k]);
    const double hi = k + 1 == hull.size() ? std::numeric_limits<double>::infinity()
                                            : crossing(hull[k], hull[k + 1]);
    const double below = std::isfinite(lo) ? stats::normal_cdf((lo - mean) / sd) : 0.0;
    const double above = std::isfinite(hi) ? stats::normal_sf((hi - mean) / sd) : 0.0;
    error_mass += prior.probs[i] * (below + above);
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (!chosen[i]) error_mass += prior.probs[i];
  }
  out.alpha = out.unclamped = std::clamp(error_mass, 0.0, 1.0);
  return out;
}

BoundResult map_error_monte_carlo(const TypePrior& prior, const ObservationFamily& family,
                                  std::size_t samples, const MonteCarloOptions& options,
                                  std::uint64_t substream) {
  if (options.n_mc < 1) throw ConfigError("n_mc must be >= 1");
  validate(family, prior.size());

  BoundResult out;
  out.method = Method::MapMonteCarlo;
  out.n_mc = options.n_mc;

  if (samples == 0) {
    // No data: the classifier always answers the prior mode.
    out.alpha = out.unclamped =
        1.0 - *std::max_element(prior.probs.begin(), prior.probs.end());
    out.std_error = 0.0;
    return out;
  }

  std::vector<double> prior_cdf(prior.size());
  std::partial_sum(prior.probs.begin(), prior.probs.end(), prior_cdf.begin());
  std::vector<std::vector<double>> comp_cdf;
  for (const TypeDistribution& t : family.types) {
    std::vector<double> cdf;
    double acc = 0.0;
    for (const LogNormalComponent& c : t.components) cdf.push_back(acc += c.weight);
    comp_cdf.push_back(std::move(cdf));
  }
  auto pick = [](const std::vector<double>& cdf, double u) {
    const double scaled = u * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), scaled);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
  };

  constexpr std::size_t kChunk = 1 << 15;
  const std::size_t n_chunks = (options.n_mc + kChunk - 1) / kChunk;
  const rng::Stream root(options.seed, rng::labels::kMapMonteCarlo, substream);
  std::vector<std::size_t> errors(n_chunks, 0);

  tbb::task_arena arena(options.threads > 0 ? options.threads : tbb::task_arena::automatic);
  arena.execute([&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n_chunks), [&](const auto& range) {
      MapClassifier classifier(prior, family);
      std::vector<double> y(samples);
      for (std::size_t c = range.begin(); c != range.end(); ++c) {
        rng::Cursor draw(root.substream(c));
        const std::size_t begin = c * kChunk;
        const std::size_t end = std::min(options.n_mc, begin + kChunk);
        std::size_t wrong = 0;
        for (std::size_t s = begin; s < end; ++s) {
          const std::size_t theta = pick(prior_cdf, draw.uniform());
          const LogNormalComponent& comp =
              family.types[theta].components[pick(comp_cdf[theta], draw.uniform())];
          for (double& v : y) v = std::exp(comp.mu + comp.sigma * draw.normal());
          if (classifier.classify(y) != theta) ++wrong;
        }
        errors[c] = wrong;
      }
    });
  });

  const std::size_t total = std::accumulate(errors.begin(), errors.end(), std::size_t{0});
  const double n = static_cast<double>(options.n_mc);
  out.alpha = out.unclamped = static_cast<double>(total) / n;
  out.std_error = std::sqrt(out.alpha * (1.0 - out.alpha) / n);
  return out;
}

}  // namespace dlcpriv::privacy
