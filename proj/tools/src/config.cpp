#include "dlcpriv/cli/config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "dlcpriv/error.hpp"

namespace dlcpriv::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError((path.empty() ? std::string("/") : path) + ": " + what);
}

// Strict view over one JSON object: every key must be consumed.
class Fields {
 public:
  Fields(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }
  Fields(const Fields&) = delete;
  Fields& operator=(const Fields&) = delete;

  ~Fields() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) fail(path_ + "/" + key, "unknown key");
    }
  }

  const Json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }
  std::string child(const std::string& key) const { return path_ + "/" + key; }

  void number(const std::string& key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) fail(child(key), "expected a number");
      out = v->get<double>();
    }
  }
  template <class U>
  void count(const std::string& key, U& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
        fail(child(key), "expected a non-negative integer");
      }
      out = static_cast<U>(v->get<std::uint64_t>());
    }
  }
  void integer(const std::string& key, int& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) fail(child(key), "expected an integer");
      const auto x = v->get<std::int64_t>();
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        fail(child(key), "integer out of range");
      }
      out = static_cast<int>(x);
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) fail(child(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) fail(child(key), "expected a string");
      out = v->get<std::string>();
    }
  }

 private:
  const Json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "JSON syntax error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError(os.str());
  }
}

void read_tcl(const Json& node, const std::string& path, TclParams& p) {
  Fields f(node, path);
  f.number("resistance", p.resistance);
  f.number("capacitance", p.capacitance);
  f.number("theta_ambient", p.theta_ambient);
  f.number("theta_set", p.theta_set);
  f.number("deadband", p.deadband);
  f.number("power_transfer", p.power_transfer);
  f.number("power_elec", p.power_elec);
  f.number("step_min", p.step_min);
}

Json tcl_json(const TclParams& p) {
  return Json{{"resistance", p.resistance},         {"capacitance", p.capacitance},
              {"theta_ambient", p.theta_ambient},   {"theta_set", p.theta_set},
              {"deadband", p.deadband},             {"power_transfer", p.power_transfer},
              {"power_elec", p.power_elec},         {"step_min", p.step_min}};
}

std::vector<double> number_list(const Json& node, const std::string& path) {
  if (!node.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) fail(path + "/" + std::to_string(i), "expected a number");
    out.push_back(node[i].get<double>());
  }
  return out;
}

// A result envelope is accepted wherever its config would be, so a run can be
// repeated from its own output.
Json unwrap_envelope(Json doc, std::initializer_list<const char*> sections) {
  if (!doc.is_object() || !doc.contains("tool") || !doc.contains("config")) return doc;
  Json config = doc["config"];
  if (config.is_object()) config.erase("sweep");
  for (const char* key : sections) {
    if (config.is_object() && config.contains(key)) return config[key];
  }
  return config;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ConfigError("failed writing " + path.string());
}

SimConfig parse_sim_config(std::string_view text) {
  const Json doc = unwrap_envelope(parse_text(text), {"simulation"});
  SimConfig cfg;
  Scenario& s = cfg.scenario;
  Fields root(doc, "");
  if (const Json* n = root.find("population")) {
    Fields f(*n, "/population");
    f.count("n_tcls", s.population.n_tcls);
    f.number("jitter_fraction", s.population.jitter_fraction);
    f.number("init_on_probability", s.population.init_on_probability);
    if (const Json* nominal = f.find("nominal")) read_tcl(*nominal, "/population/nominal", s.population.nominal);
  }
  if (const Json* n = root.find("controller")) {
    Fields f(*n, "/controller");
    f.boolean("enabled", s.control_enabled);
    f.integer("n_bins", s.controller.n_bins);
    f.number("command_period_min", s.controller.command_period_min);
    f.number("deadzone_kw", s.controller.deadzone_kw);
  }
  if (const Json* n = root.find("sampling")) {
    Fields f(*n, "/sampling");
    f.number("period_min", s.sampling.period_min);
    f.number("phase_min", s.sampling.phase_min);
  }
  if (const Json* n = root.find("desired_signal")) {
    Fields f(*n, "/desired_signal");
    f.number("knot_period_min", s.desired.knot_period_min);
    f.number("low_kw", s.desired.low_kw);
    f.number("high_kw", s.desired.high_kw);
  }
  if (const Json* n = root.find("noise")) {
    Fields f(*n, "/noise");
    f.number("variance", s.noise.variance);
  }
  if (const Json* n = root.find("horizon")) {
    Fields f(*n, "/horizon");
    f.number("minutes", s.desired.horizon_min);
  }
  if (const Json* n = root.find("seeds")) {
    Fields f(*n, "/seeds");
    f.count("base", cfg.seed);
  }
  s.population.seed = cfg.seed;
  validate(s);
  return cfg;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  try {
    return parse_sim_config(read_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Json to_json(const SimConfig& cfg) {
  const Scenario& s = cfg.scenario;
  Json j;
  j["population"] = Json{{"n_tcls", s.population.n_tcls},
                         {"jitter_fraction", s.population.jitter_fraction},
                         {"init_on_probability", s.population.init_on_probability},
                         {"nominal", tcl_json(s.population.nominal)}};
  j["controller"] = Json{{"enabled", s.control_enabled},
                         {"n_bins", s.controller.n_bins},
                         {"command_period_min", s.controller.command_period_min},
                         {"deadzone_kw", s.controller.deadzone_kw}};
  j["sampling"] = Json{{"period_min", s.sampling.period_min}, {"phase_min", s.sampling.phase_min}};
  j["desired_signal"] = Json{{"knot_period_min", s.desired.knot_period_min},
                             {"low_kw", s.desired.low_kw},
                             {"high_kw", s.desired.high_kw}};
  j["noise"] = Json{{"variance", s.noise.variance}};
  j["horizon"] = Json{{"minutes", s.desired.horizon_min}};
  j["seeds"] = Json{{"base", cfg.seed}};
  return j;
}

privacy::PrivacyScenario parse_privacy_scenario(std::string_view text) {
  using namespace privacy;
  const Json doc = unwrap_envelope(parse_text(text), {"scenario", "privacy"});
  PrivacyScenario s;
  Fields root(doc, "");
  root.string("name", s.name);

  const Json* types = root.find("types");
  if (!types || !types->is_array()) fail("/types", "expected an array of types");
  std::vector<std::string> labels;
  std::vector<double> weights;
  for (std::size_t i = 0; i < types->size(); ++i) {
    const std::string path = "/types/" + std::to_string(i);
    Fields t((*types)[i], path);
    std::string label = "type" + std::to_string(i);
    double weight = 1.0;
    t.string("label", label);
    t.number("weight", weight);
    labels.push_back(label);
    weights.push_back(weight);

    const Json* comps = t.find("components");
    if (!comps || !comps->is_array() || comps->empty()) {
      fail(path + "/components", "expected a non-empty array");
    }
    TypeDistribution dist;
    for (std::size_t c = 0; c < comps->size(); ++c) {
      Fields cf((*comps)[c], path + "/components/" + std::to_string(c));
      LogNormalComponent comp;
      cf.number("weight", comp.weight);
      cf.number("mu", comp.mu);
      cf.number("sigma", comp.sigma);
      dist.components.push_back(comp);
    }
    s.family.types.push_back(std::move(dist));
  }
  s.prior = make_prior(std::move(labels), weights);
  root.number("window_min", s.window_min);
  root.number("reference_period_min", s.reference_period_min);

  if (const Json* scaling = root.find("scaling")) {
    Fields f(*scaling, "/scaling");
    std::string rule = "location-shift";
    f.string("rule", rule);
    if (rule == "location-shift") s.rule = ScalingRule::LocationShift;
    else if (rule == "explicit-table") s.rule = ScalingRule::ExplicitTable;
    else fail("/scaling/rule", "expected \"location-shift\" or \"explicit-table\"");
    if (const Json* table = f.find("table")) {
      if (!table->is_array()) fail("/scaling/table", "expected an array");
      for (std::size_t i = 0; i < table->size(); ++i) {
        const std::string path = "/scaling/table/" + std::to_string(i);
        Fields rf((*table)[i], path);
        PeriodParameters row;
        rf.number("h_min", row.period_min);
        if (const Json* mu = rf.find("mu")) row.mu = number_list(*mu, path + "/mu");
        rf.number("sigma", row.sigma);
        s.table.push_back(std::move(row));
      }
    }
  }
  validate(s);
  return s;
}

privacy::PrivacyScenario load_privacy_scenario(const std::string& path_or_name) {
  if (path_or_name == "recs-income") return privacy::recs_income_scenario();
  try {
    return parse_privacy_scenario(read_file(path_or_name));
  } catch (const ConfigError& e) {
    throw ConfigError(path_or_name + ": " + e.what());
  }
}

Json to_json(const privacy::PrivacyScenario& s) {
  using namespace privacy;
  Json j;
  j["name"] = s.name;
  Json types = Json::array();
  for (std::size_t i = 0; i < s.family.size(); ++i) {
    Json comps = Json::array();
    for (const LogNormalComponent& c : s.family.types[i].components) {
      comps.push_back(Json{{"weight", c.weight}, {"mu", c.mu}, {"sigma", c.sigma}});
    }
    types.push_back(Json{{"label", s.prior.labels[i]},
                         {"weight", s.prior.weights[i]},
                         {"components", std::move(comps)}});
  }
  j["types"] = std::move(types);
  j["window_min"] = s.window_min;
  j["reference_period_min"] = s.reference_period_min;
  Json table = Json::array();
  for (const PeriodParameters& row : s.table) {
    table.push_back(Json{{"h_min", row.period_min}, {"mu", row.mu}, {"sigma", row.sigma}});
  }
  j["scaling"] = Json{{"rule", s.rule == ScalingRule::LocationShift ? "location-shift" : "explicit-table"},
                      {"table", std::move(table)}};
  return j;
}

Json population_to_json(std::span<const TclParams> params) {
  Json list = Json::array();
  for (const TclParams& p : params) list.push_back(tcl_json(p));
  return list;
}

std::vector<TclParams> population_from_json(const Json& doc) {
  if (!doc.is_array()) fail("/tcls", "expected an array of TCL parameter objects");
  std::vector<TclParams> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    TclParams p;
    read_tcl(doc[i], "/tcls/" + std::to_string(i), p);
    validate(p);
    out.push_back(p);
  }
  return out;
}

}  // namespace dlcpriv::cli
