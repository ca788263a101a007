#include <algorithm>
#include <cmath>
#include <sstream>

#include "dlcpriv/error.hpp"
#include "dlcpriv/privacy.hpp"

namespace dlcpriv::privacy {

namespace {

bool same_period(double a, double b) noexcept { return std::abs(a - b) <= 1e-9 * std::max(1.0, a); }

std::size_t samples_in_window(double window_min, double h_min) {
  return static_cast<std::size_t>(std::floor(window_min / h_min + 1e-9));
}

}  // namespace

void validate(const PrivacyScenario& s) {
  if (s.prior.size() < 2) throw ConfigError("privacy scenario needs at least two types");
  double total = 0.0;
  for (double p : s.prior.probs) total += p;
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("prior must sum to 1");
  validate(s.family, s.prior.size());
  if (!(s.window_min > 0.0)) throw ConfigError("window_min must be > 0");
  if (!(s.reference_period_min > 0.0)) throw ConfigError("reference_period_min must be > 0");
  for (const PeriodParameters& row : s.table) {
    if (!(row.period_min > 0.0)) throw ConfigError("table rows need period_min > 0");
    if (row.mu.size() != s.prior.size()) {
      std::ostringstream os;
      os << "table row for h=" << row.period_min << " has " << row.mu.size()
         << " locations, expected " << s.prior.size();
      throw ConfigError(os.str());
    }
    if (!(row.sigma > 0.0)) throw ConfigError("table rows need sigma > 0");
  }
  if (s.rule == ScalingRule::ExplicitTable && s.table.empty()) {
    throw ConfigError("explicit-table scaling needs at least one table row");
  }
}

ScaledFamily scale_parameters(const PrivacyScenario& scenario, double h_min) {
  if (!(h_min > 0.0)) throw ConfigError("sampling period must be > 0");
  ScaledFamily out;
  out.samples = samples_in_window(scenario.window_min, h_min);
  if (scenario.rule == ScalingRule::LocationShift) {
    const double shift = std::log(scenario.reference_period_min / h_min);
    out.family = scenario.family;
    for (TypeDistribution& t : out.family.types) {
      for (LogNormalComponent& c : t.components) c.mu -= shift;
    }
    return out;
  }
  const auto row = std::find_if(scenario.table.begin(), scenario.table.end(),
                                [&](const PeriodParameters& r) { return same_period(r.period_min, h_min); });
  if (row == scenario.table.end()) {
    std::ostringstream os;
    os << "explicit-table scaling has no row for h=" << h_min << " min";
    throw ConfigError(os.str());
  }
  out.family = point_mass_family(row->mu, row->sigma);
  return out;
}

std::vector<PrivacyRow> privacy_sweep(const PrivacyScenario& scenario, std::span<const double> h_list,
                                      const MethodSet& methods, const MonteCarloOptions& mc) {
  validate(scenario);
  std::vector<double> hs(h_list.begin(), h_list.end());
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());

  std::vector<PrivacyRow> rows;
  for (double h : hs) {
    const ScaledFamily scaled = scale_parameters(scenario, h);
    PrivacyRow row;
    row.h_min = h;
    row.samples = scaled.samples;
    const std::size_t T = scaled.samples;
    const std::optional<double> sigma = scaled.family.shared_scale();
    const bool closed_form = sigma.has_value() && scaled.family.point_mass();

    auto unsupported = [&](Method m, const std::string& why) {
      std::ostringstream os;
      os << "h=" << h << ": " << to_string(m) << " skipped (" << why << ")";
      row.warnings.push_back(os.str());
    };
    auto store = [&](Method m, BoundResult r) { row.results[static_cast<std::size_t>(m)] = std::move(r); };

    std::vector<double> mu;
    SquareMatrix kl;
    if (closed_form) {
      mu = scaled.family.locations();
      kl = kl_matrix_shared_scale(mu, *sigma, T);
    }

    if (methods.contains(Method::MapExact)) {
      if (closed_form) store(Method::MapExact, map_error_exact_shared_scale(scenario.prior, mu, *sigma, T));
      else unsupported(Method::MapExact, "needs a point-mass shared-scale family");
    }
    if (methods.contains(Method::MapMonteCarlo)) {
      const auto sub = static_cast<std::uint64_t>(std::llround(h * 1000.0));
      store(Method::MapMonteCarlo, map_error_monte_carlo(scenario.prior, scaled.family, T, mc, sub));
    }
    if (methods.contains(Method::LeCamPinsker)) {
      if (closed_form) store(Method::LeCamPinsker, lecam_bound(scenario.prior, tv_matrix_pinsker(kl), Method::LeCamPinsker));
      else unsupported(Method::LeCamPinsker, "no closed-form KL for this family");
    }
    if (methods.contains(Method::LeCamExactTv)) {
      if (closed_form) {
        store(Method::LeCamExactTv,
              lecam_bound(scenario.prior, tv_matrix_shared_scale(mu, *sigma, T), Method::LeCamExactTv));
      } else {
        unsupported(Method::LeCamExactTv, "no closed-form TV for this family");
      }
    }
    if (methods.contains(Method::Fano)) {
      if (!closed_form) {
        unsupported(Method::Fano, "no closed-form KL for this family");
      } else if (scenario.prior.size() < 3) {
        unsupported(Method::Fano, "needs at least three types");
      } else {
        BoundResult f = fano_bound(kl);
        const double uniform = 1.0 / static_cast<double>(scenario.prior.size());
        f.nonuniform_prior = std::any_of(scenario.prior.probs.begin(), scenario.prior.probs.end(),
                                         [&](double p) { return std::abs(p - uniform) > 1e-12; });
        store(Method::Fano, std::move(f));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

LogNormalFit fit_lognormal_shared_scale(const std::vector<std::vector<double>>& groups) {
  if (groups.empty()) throw ConfigError("fit needs at least one group");
  LogNormalFit fit;
  double ss = 0.0;
  std::size_t n = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw ConfigError("fit needs at least two samples per group");
    double sum = 0.0;
    for (double x : g) {
      if (!(x > 0.0)) throw ConfigError("log-normal samples must be strictly positive");
      sum += std::log(x);
    }
    const double m = sum / static_cast<double>(g.size());
    for (double x : g) {
      const double d = std::log(x) - m;
      ss += d * d;
    }
    fit.mu.push_back(m);
    n += g.size();
  }
  fit.sigma = std::sqrt(ss / static_cast<double>(n - groups.size()));
  return fit;
}

PrivacyScenario recs_income_scenario() {
  PrivacyScenario s;
  s.name = "recs-income";
  const double households[] = {23.7, 48.7, 41.2};  // millions, of 113.6
  s.prior = make_prior({"low", "middle", "upper"}, households);
  const double annual_mu[] = {8.88, 9.06, 9.31};
  s.family = point_mass_family(annual_mu, 0.49);
  s.window_min = 60.0;
  s.reference_period_min = 525600.0;
  s.rule = ScalingRule::ExplicitTable;
  s.table = {
      {1.0, {0.014, 0.016, 0.017}, 0.49},
      {60.0, {0.82, 0.99, 1.26}, 0.49},
  };
  return s;
}

}  // namespace dlcpriv::privacy
