#include <iostream>
#include <memory>
#include <string>

#include <tbb/global_control.h>

#include "CLI11.hpp"

#include "dlcpriv/cli/commands.hpp"
#include "dlcpriv/error.hpp"

namespace {

using namespace dlcpriv::cli;

void add_common(CLI::App* cmd, CommonOptions& common, bool with_config = true) {
  if (with_config) cmd->add_option("--config", common.config, "simulation config JSON (or a result envelope)");
  cmd->add_option("--seed", common.seed, "master seed, overrides seeds.base");
  cmd->add_option("--out", common.out, "output prefix")->capture_default_str();
  cmd->add_option("--threads", common.threads, "worker cap, 0 for all cores")
      ->check(CLI::NonNegativeNumber);
}

void report(const CommandOutput& out, const std::string& prefix) {
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& f : out.files) std::cout << prefix << f.first << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct load control simulator and sampling-rate privacy bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DLCPRIV_VERSION);

  CommonOptions common;
  SweepCommandOptions sweep;
  PrivacyCommandOptions priv;
  std::string h_text, methods_text;

  auto* gen = app.add_subcommand("gen-population", "sample TCL parameters");
  add_common(gen, common);
  auto* sim = app.add_subcommand("simulate", "one closed-loop trial");
  add_common(sim, common);

  auto add_sweep = [&](CLI::App* cmd) {
    cmd->add_option("--h-list", h_text, "comma-separated sampling periods in minutes");
    cmd->add_option("--trials", sweep.trials, "trials per sampling period")->capture_default_str();
    cmd->add_flag("!--no-comfort-check", sweep.check_comfort,
                  "skip the uncontrolled twin runs used for the comfort check");
  };
  auto add_privacy = [&](CLI::App* cmd, bool with_h) {
    cmd->add_option("--scenario", priv.scenario, "privacy scenario JSON or 'recs-income'")
        ->capture_default_str();
    if (with_h) cmd->add_option("--h-list", h_text, "comma-separated sampling periods in minutes");
    cmd->add_option("--methods", methods_text,
                    "map-exact,map-mc,lecam-exact-tv,lecam-pinsker,fano or all");
    cmd->add_option("--n-mc", priv.n_mc, "Monte Carlo draws")->capture_default_str();
    cmd->add_option("--scaling", priv.scaling, "location-shift or explicit-table");
  };

  auto* sw = app.add_subcommand("sweep", "error statistics across sampling periods");
  add_common(sw, common);
  add_sweep(sw);
  auto* pr = app.add_subcommand("privacy", "inferential privacy level per sampling period");
  add_common(pr, common, false);
  add_privacy(pr, true);
  auto* tr = app.add_subcommand("tradeoff", "tracking error joined with privacy level per h");
  add_common(tr, common);
  add_sweep(tr);
  add_privacy(tr, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::unique_ptr<tbb::global_control> cap;
  if (common.threads > 0) {
    cap = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism,
                                                static_cast<std::size_t>(common.threads));
  }

  try {
    if (!h_text.empty()) {
      sweep.h_list = parse_number_list(h_text);
      priv.h_list = sweep.h_list;
    }
    if (!methods_text.empty()) priv.methods = split_list(methods_text);

    CommandOutput out;
    if (*gen) out = cmd_gen_population(common);
    else if (*sim) out = cmd_simulate(common);
    else if (*sw) out = cmd_sweep(common, sweep);
    else if (*pr) out = cmd_privacy(common, priv);
    else out = cmd_tradeoff(common, sweep, priv);
    write_outputs(common.out, out);
    report(out, common.out);
    return 0;
  } catch (const dlcpriv::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dlcpriv::UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
