#include "dlcpriv/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "dlcpriv/error.hpp"
#include "dlcpriv/population.hpp"

#ifndef DLCPRIV_VERSION
#define DLCPRIV_VERSION "0.0.0"
#endif

namespace dlcpriv::cli {

namespace {

using privacy::Method;

Json envelope(const std::string& command, Json config, std::uint64_t seed, Json results,
              const std::vector<std::string>& warnings) {
  Json j;
  j["tool"] = "dlcpriv";
  j["version"] = DLCPRIV_VERSION;
  j["command"] = command;
  j["config"] = std::move(config);
  j["seeds"] = Json{{"base", seed}};
  j["results"] = std::move(results);
  j["warnings"] = warnings;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

SimConfig load_config(const CommonOptions& common) {
  SimConfig cfg = common.config ? load_sim_config(*common.config) : SimConfig{};
  if (common.seed) {
    cfg.seed = *common.seed;
    cfg.scenario.population.seed = *common.seed;
  }
  return cfg;
}

std::string h_label(double h) { return format_number(h); }

Json box_json(const stats::BoxStats& b) {
  return Json{{"n", b.n},           {"mean", b.mean},
              {"std_error", b.std_error}, {"q1", b.q1},
              {"median", b.median}, {"q3", b.q3},
              {"lo_whisker", b.lo_whisker}, {"hi_whisker", b.hi_whisker},
              {"outliers", b.outliers}};
}

Json bound_json(const privacy::BoundResult& r) {
  Json j{{"alpha", r.alpha}};
  if (r.method == Method::Fano) {
    j["unclamped"] = r.unclamped;
    j["nonuniform_prior"] = r.nonuniform_prior;
  }
  if (r.std_error) {
    j["std_error"] = *r.std_error;
    j["n_mc"] = r.n_mc;
  }
  if (r.argmax_pair) j["argmax_pair"] = Json::array({r.argmax_pair->first, r.argmax_pair->second});
  return j;
}

privacy::MethodSet resolve_methods(const std::optional<std::vector<std::string>>& names) {
  if (!names) return privacy::MethodSet{};
  privacy::MethodSet set;
  set.enabled.fill(false);
  for (const std::string& name : *names) {
    if (name == "all") return privacy::MethodSet::all();
    const auto m = privacy::parse_method(name);
    if (!m) {
      throw ConfigError("unknown method '" + name +
                        "' (expected map-exact, map-mc, lecam-exact-tv, lecam-pinsker, fano, all)");
    }
    set.set(*m, true);
  }
  return set;
}

privacy::PrivacyScenario resolve_scenario(const PrivacyCommandOptions& opts) {
  privacy::PrivacyScenario s = load_privacy_scenario(opts.scenario);
  if (opts.scaling) {
    if (*opts.scaling == "location-shift") s.rule = privacy::ScalingRule::LocationShift;
    else if (*opts.scaling == "explicit-table") s.rule = privacy::ScalingRule::ExplicitTable;
    else throw ConfigError("--scaling must be location-shift or explicit-table");
    privacy::validate(s);
  }
  return s;
}

std::vector<double> default_privacy_h(const privacy::PrivacyScenario& s) {
  std::vector<double> h;
  if (s.rule == privacy::ScalingRule::ExplicitTable) {
    for (const auto& row : s.table) h.push_back(row.period_min);
  } else {
    for (int i = 1; i <= 60; ++i) h.push_back(i);
  }
  return h;
}

Json privacy_rows_json(const std::vector<privacy::PrivacyRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json j{{"h_min", row.h_min}, {"T", row.samples}};
    for (std::size_t m = 0; m < privacy::kMethodCount; ++m) {
      const auto& r = row.results[m];
      if (r) j[std::string(privacy::to_string(static_cast<Method>(m)))] = bound_json(*r);
    }
    out.push_back(std::move(j));
  }
  return out;
}

Json sweep_rows_json(const SweepResult& result, bool comfort) {
  Json rows = Json::array();
  for (const SweepRow& row : result.rows) {
    Json j{{"h_min", row.h_min}, {"l1_mw", box_json(row.l1)}};
    if (comfort) {
      j["comfort_violations"] = row.comfort_violations;
      j["worst_comfort_gap_degc"] = row.worst_comfort_gap;
    }
    rows.push_back(std::move(j));
  }
  Json j{{"rows", std::move(rows)}};
  if (comfort && !result.baseline_l1_trials.empty()) {
    std::vector<double> sorted = result.baseline_l1_trials;
    j["uncontrolled_l1_mw"] = box_json(stats::box_stats(sorted));
  }
  return j;
}

void sort_unique(std::vector<double>& h) {
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
}

}  // namespace

const std::string* CommandOutput::file(const std::string& suffix) const {
  for (const auto& [name, contents] : files) {
    if (name == suffix) return &contents;
  }
  return nullptr;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) throw ConfigError("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

CsvTable trajectory_table(const TrialResult& r, double step_min) {
  CsvTable t;
  t.header = {"step", "minute", "p_actual_kw", "p_desired_kw", "n_on"};
  for (std::size_t k = 0; k < r.actual_kw.size(); ++k) {
    t.rows.push_back({format_count(k), format_number(static_cast<double>(k) * step_min),
                      format_number(r.actual_kw[k]), format_number(r.desired_kw[k]),
                      format_count(r.n_on[k])});
  }
  return t;
}

CsvTable sweep_table(const SweepResult& result) {
  CsvTable t;
  t.header = {"h_min", "n_trials", "mean_l1_mw", "stderr_mw", "q1",
              "median", "q3",       "lo_whisker", "hi_whisker"};
  for (const SweepRow& row : result.rows) {
    const stats::BoxStats& b = row.l1;
    t.rows.push_back({h_label(row.h_min), format_count(b.n), format_number(b.mean),
                      format_number(b.std_error), format_number(b.q1), format_number(b.median),
                      format_number(b.q3), format_number(b.lo_whisker),
                      format_number(b.hi_whisker)});
  }
  return t;
}

CsvTable privacy_table(const std::vector<privacy::PrivacyRow>& rows) {
  CsvTable t;
  t.header = {"h_min",       "T",          "alpha_map_exact",      "alpha_map_mc",
              "mc_stderr",   "alpha_lecam_pinsker", "alpha_lecam_tv", "alpha_fano"};
  auto alpha = [](const privacy::PrivacyRow& row, Method m) -> std::optional<double> {
    const auto& r = row.get(m);
    return r ? std::optional<double>(r->alpha) : std::nullopt;
  };
  for (const auto& row : rows) {
    const auto& mc = row.get(Method::MapMonteCarlo);
    t.rows.push_back({h_label(row.h_min), format_count(row.samples),
                      format_optional(alpha(row, Method::MapExact)),
                      format_optional(alpha(row, Method::MapMonteCarlo)),
                      format_optional(mc ? mc->std_error : std::nullopt),
                      format_optional(alpha(row, Method::LeCamPinsker)),
                      format_optional(alpha(row, Method::LeCamExactTv)),
                      format_optional(alpha(row, Method::Fano))});
  }
  return t;
}

CommandOutput cmd_gen_population(const CommonOptions& common) {
  const SimConfig cfg = load_config(common);
  const std::vector<TclParams> params = sample_population(cfg.scenario.population);
  CommandOutput out;
  Json results{{"n_tcls", params.size()}, {"tcls", population_to_json(params)}};
  out.files.emplace_back(".population.json",
                         dump(envelope("gen-population", to_json(cfg), cfg.seed, std::move(results),
                                       out.warnings)));
  return out;
}

CommandOutput cmd_simulate(const CommonOptions& common) {
  const SimConfig cfg = load_config(common);
  const TrialResult r = run_trial(cfg.scenario, cfg.seed);
  std::uint64_t toggles = 0;
  for (auto t : r.forced_toggles) toggles += t;
  double worst = 0.0;
  for (double e : r.max_excursion) worst = std::max(worst, e);

  CommandOutput out;
  out.files.emplace_back(".trajectory.csv", to_csv(trajectory_table(r, cfg.scenario.step_min())));
  Json results{{"l1_mw", r.errors.l1},
               {"l2_mw", r.errors.l2},
               {"rms_mw", r.errors.rms},
               {"steps", r.actual_kw.size()},
               {"forced_toggles", toggles},
               {"max_excursion_degc", worst}};
  out.files.emplace_back(".envelope.json", dump(envelope("simulate", to_json(cfg), cfg.seed,
                                                         std::move(results), out.warnings)));
  return out;
}

CommandOutput cmd_sweep(const CommonOptions& common, const SweepCommandOptions& sweep) {
  const SimConfig cfg = load_config(common);
  if (sweep.trials < 1) throw ConfigError("--trials must be at least 1");
  SweepOptions opts;
  opts.h_list = sweep.h_list;
  opts.n_trials = sweep.trials;
  opts.base_seed = cfg.seed;
  opts.threads = common.threads;
  opts.check_comfort = sweep.check_comfort;
  const SweepResult result = run_sweep(cfg.scenario, opts);

  CommandOutput out;
  for (const SweepRow& row : result.rows) {
    if (sweep.check_comfort && row.comfort_violations > 0) {
      std::ostringstream os;
      os << "h=" << h_label(row.h_min) << ": " << row.comfort_violations
         << " (trial, TCL) pairs exceed their uncontrolled excursion (worst by "
         << format_number(row.worst_comfort_gap) << " degC)";
      out.warnings.push_back(os.str());
    }
  }
  out.files.emplace_back(".sweep.csv", to_csv(sweep_table(result)));
  Json config = to_json(cfg);
  Json sweep_cfg{{"h_list", Json::array()},
                 {"trials", sweep.trials},
                 {"check_comfort", sweep.check_comfort}};
  for (const SweepRow& row : result.rows) sweep_cfg["h_list"].push_back(row.h_min);
  config["sweep"] = std::move(sweep_cfg);
  out.files.emplace_back(".envelope.json",
                         dump(envelope("sweep", std::move(config), cfg.seed,
                                       sweep_rows_json(result, sweep.check_comfort), out.warnings)));
  return out;
}

CommandOutput cmd_privacy(const CommonOptions& common, const PrivacyCommandOptions& opts) {
  const privacy::PrivacyScenario scenario = resolve_scenario(opts);
  const privacy::MethodSet methods = resolve_methods(opts.methods);
  std::vector<double> h = opts.h_list ? *opts.h_list : default_privacy_h(scenario);
  sort_unique(h);
  privacy::MonteCarloOptions mc;
  mc.n_mc = opts.n_mc;
  mc.seed = common.seed.value_or(1);
  mc.threads = common.threads;
  const auto rows = privacy::privacy_sweep(scenario, h, methods, mc);

  CommandOutput out;
  for (const auto& row : rows) {
    for (const auto& w : row.warnings) out.warnings.push_back("h=" + h_label(row.h_min) + ": " + w);
  }
  out.files.emplace_back(".privacy.csv", to_csv(privacy_table(rows)));
  Json config{{"scenario", to_json(scenario)}, {"h_list", h}, {"n_mc", opts.n_mc}};
  Json names = Json::array();
  for (std::size_t m = 0; m < privacy::kMethodCount; ++m) {
    if (methods.enabled[m]) names.push_back(privacy::to_string(static_cast<Method>(m)));
  }
  config["methods"] = std::move(names);
  out.files.emplace_back(".envelope.json",
                         dump(envelope("privacy", std::move(config), mc.seed,
                                       Json{{"rows", privacy_rows_json(rows)}}, out.warnings)));
  return out;
}

CommandOutput cmd_tradeoff(const CommonOptions& common, const SweepCommandOptions& sweep,
                           PrivacyCommandOptions popts) {
  const SimConfig cfg = load_config(common);
  const privacy::PrivacyScenario scenario = resolve_scenario(popts);
  const privacy::MethodSet methods = resolve_methods(popts.methods);
  std::vector<double> h = sweep.h_list;
  sort_unique(h);
  CommandOutput out;

  // Each side keeps only the h values it can evaluate; the join reports the rest.
  std::vector<double> sim_h;
  for (double v : h) {
    SamplingPolicy p = cfg.scenario.sampling;
    p.period_min = v;
    try {
      validate(p, cfg.scenario.step_min());
      sim_h.push_back(v);
    } catch (const ConfigError& e) {
      out.warnings.push_back("sweep h=" + h_label(v) + ": " + e.what());
    }
  }
  privacy::MonteCarloOptions mc;
  mc.n_mc = popts.n_mc;
  mc.seed = cfg.seed;
  mc.threads = common.threads;
  std::vector<privacy::PrivacyRow> prows;
  for (double v : h) {
    try {
      const double one[] = {v};
      auto rows = privacy::privacy_sweep(scenario, one, methods, mc);
      for (const auto& w : rows.front().warnings) out.warnings.push_back("h=" + h_label(v) + ": " + w);
      prows.push_back(std::move(rows.front()));
    } catch (const ConfigError& e) {
      out.warnings.push_back("privacy h=" + h_label(v) + ": " + e.what());
    }
  }

  SweepResult sres;
  if (!sim_h.empty()) {
    SweepOptions sopts;
    sopts.h_list = sim_h;
    sopts.n_trials = sweep.trials;
    sopts.base_seed = cfg.seed;
    sopts.threads = common.threads;
    sopts.check_comfort = sweep.check_comfort;
    sres = run_sweep(cfg.scenario, sopts);
  }
  const CsvTable joined = inner_join(sweep_table(sres), privacy_table(prows), "h_min", out.warnings);
  out.files.emplace_back(".tradeoff.csv", to_csv(joined));

  Json config{{"simulation", to_json(cfg)},
              {"privacy", to_json(scenario)},
              {"h_list", h},
              {"trials", sweep.trials},
              {"check_comfort", sweep.check_comfort},
              {"n_mc", popts.n_mc}};
  Json results{{"sweep", sweep_rows_json(sres, sweep.check_comfort)},
               {"privacy", privacy_rows_json(prows)},
               {"joined_rows", joined.rows.size()}};
  out.files.emplace_back(".envelope.json", dump(envelope("tradeoff", std::move(config), cfg.seed,
                                                         std::move(results), out.warnings)));
  return out;
}

void write_outputs(const std::string& prefix, const CommandOutput& output) {
  for (const auto& [suffix, contents] : output.files) write_file(prefix + suffix, contents);
}

}  // namespace dlcpriv::cli
