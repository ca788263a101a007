#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dlcpriv/privacy.hpp"
#include "dlcpriv/sim.hpp"

namespace dlcpriv::cli {

using Json = nlohmann::ordered_json;

/// Simulation config file: sections population, controller, sampling,
/// desired_signal, noise, horizon, seeds. Every section and key is
/// optional; unknown keys are rejected. Defaults are the built-in scenario.
struct SimConfig {
  Scenario scenario{};
  std::uint64_t seed = 1;
};

/// Throws ConfigError carrying a line/column (syntax) or JSON-pointer
/// (schema) location.
SimConfig parse_sim_config(std::string_view text);
SimConfig load_sim_config(const std::filesystem::path& path);
/// Fully resolved form; parse_sim_config(dump) gives back the same config.
Json to_json(const SimConfig& config);

/// Privacy scenario file, see README for the schema. The name
/// "recs-income" resolves to the bundled scenario.
privacy::PrivacyScenario parse_privacy_scenario(std::string_view text);
privacy::PrivacyScenario load_privacy_scenario(const std::string& path_or_name);
Json to_json(const privacy::PrivacyScenario& scenario);

Json population_to_json(std::span<const TclParams> params);
std::vector<TclParams> population_from_json(const Json& doc);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace dlcpriv::cli
