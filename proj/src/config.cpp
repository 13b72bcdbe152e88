#include "gpdd/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace gpdd::cfg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& path) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key))
      throw ConfigError("unknown key '" + path + "/" + key + "'");
}

double require_number(const nlohmann::json& obj, const std::string& key,
                      const std::string& path) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + path + "/" + key + "'");
  if (!obj[key].is_number())
    throw ConfigError("'" + path + "/" + key + "' must be a number");
  return obj[key].get<double>();
}

std::vector<double> number_list(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError("'" + path + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("'" + path + "' must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

nlohmann::json default_config() {
  return nlohmann::json{
      {"register",
       {{"topology", "square-lattice"},
        {"rows", 2},
        {"cols", 2},
        {"diagonals", true},
        {"omega_hz", {62.8e3, 95.9e3, 120.1e3, 153.18e3}},
        {"j_mean_hz", {17.3, 17.9, 18.5, 19.2, 6.1, 6.6}}}},
      {"pulse",
       {{"delta_t_s", 1e-7}, {"theta", 0.05}, {"iterations", 1}, {"hahn_echo", true}}},
      {"noise", {{"enabled", true}, {"preset", "caption"}, {"seed", 12345}}},
      {"experiment",
       {{"total_time_s", 8e-3},
        {"sample_interval_s", 2e-4},
        {"ensemble", 8},
        {"metric", "unitary"},
        {"reference", "local-frame"}}},
      {"output",
       {{"directory", "out"},
        {"decoupled_csv", "decoupled.csv"},
        {"free_csv", "free.csv"},
        {"summary_json", "summary.json"}}}};
}

ConfigDocument parse_config(const nlohmann::json& user_doc) {
  if (!user_doc.is_object()) throw ConfigError("configuration root must be a JSON object");
  reject_unknown_keys(user_doc, {"register", "pulse", "noise", "experiment", "output"}, "");

  // merge over defaults section by section (user keys win)
  nlohmann::json doc = default_config();
  for (const auto& [section, content] : user_doc.items()) {
    if (!content.is_object())
      throw ConfigError("section '" + section + "' must be a JSON object");
    // an explicit register section replaces the default wholesale: mixing the
    // default lattice with, say, a user chain would silently mismatch sizes
    if (section == "register")
      doc["register"] = content;
    else
      for (const auto& [key, value] : content.items()) doc[section][key] = value;
  }

  ConfigDocument out;
  out.raw = doc;

  // register ------------------------------------------------------------
  const nlohmann::json& reg_j = doc["register"];
  reject_unknown_keys(reg_j,
                      {"topology", "rows", "cols", "length", "diagonals", "edges",
                       "omega_hz", "j_mean_hz"},
                      "register");
  if (!reg_j.contains("topology")) throw ConfigError("missing key 'register/topology'");
  const std::string topo_name = reg_j["topology"].get<std::string>();
  Topology topo;
  if (topo_name == "chain") {
    topo.kind = Topology::Kind::chain;
    topo.length = static_cast<int>(require_number(reg_j, "length", "register"));
  } else if (topo_name == "square-lattice") {
    topo.kind = Topology::Kind::square_lattice;
    topo.rows = static_cast<int>(require_number(reg_j, "rows", "register"));
    topo.cols = static_cast<int>(require_number(reg_j, "cols", "register"));
    topo.diagonals = reg_j.value("diagonals", false);
  } else if (topo_name == "explicit") {
    topo.kind = Topology::Kind::explicit_edges;
    if (!reg_j.contains("edges")) throw ConfigError("missing key 'register/edges'");
    for (const auto& e : reg_j["edges"]) {
      if (!e.is_array() || e.size() != 2)
        throw ConfigError("'register/edges' entries must be [a, b] pairs");
      topo.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  } else {
    throw ConfigError("'register/topology' must be chain, square-lattice or explicit");
  }
  if (!reg_j.contains("omega_hz")) throw ConfigError("missing key 'register/omega_hz'");
  if (!reg_j.contains("j_mean_hz")) throw ConfigError("missing key 'register/j_mean_hz'");
  std::vector<double> omegas = number_list(reg_j["omega_hz"], "register/omega_hz");
  std::vector<double> jmeans = number_list(reg_j["j_mean_hz"], "register/j_mean_hz");
  for (double& w : omegas) w *= kTwoPi;
  for (double& j : jmeans) j *= kTwoPi;
  try {
    out.experiment.register_spec = build_register(topo, omegas, jmeans);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("register: ") + e.what());
  }

  // pulse ----------------------------------------------------------------
  const nlohmann::json& pulse = doc["pulse"];
  reject_unknown_keys(pulse, {"delta_t_s", "theta", "iterations", "hahn_echo"}, "pulse");
  const double delta_t = require_number(pulse, "delta_t_s", "pulse");
  const double theta = require_number(pulse, "theta", "pulse");
  try {
    out.experiment.params = BlockParams::from_theta(delta_t, theta);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("pulse: ") + e.what());
  }
  out.experiment.iterations = static_cast<int>(pulse.value("iterations", 1));
  if (out.experiment.iterations < 1) throw ConfigError("'pulse/iterations' must be >= 1");
  out.experiment.hahn_echo = pulse.value("hahn_echo", true);

  // noise ----------------------------------------------------------------
  const nlohmann::json& noise = doc["noise"];
  reject_unknown_keys(noise, {"enabled", "preset", "j_std_hz", "seed"}, "noise");
  out.experiment.seed = noise.value("seed", 0ull);
  if (noise.value("enabled", false)) {
    CouplingNoise model;
    model.seed = out.experiment.seed;
    std::vector<double> stds;
    if (noise.contains("j_std_hz")) {
      stds = number_list(noise["j_std_hz"], "noise/j_std_hz");
      if (stds.size() != out.experiment.register_spec.edges.size())
        throw ConfigError("'noise/j_std_hz' needs one value per edge (" +
                          std::to_string(out.experiment.register_spec.edges.size()) + ")");
      for (double& s : stds) s *= kTwoPi;
    } else {
      const std::string preset = noise.value("preset", "caption");
      double adjacent_hz = 0.0, diagonal_hz = 0.0;
      if (preset == "caption") {
        adjacent_hz = 9.0;
        diagonal_hz = 3.0;
      } else if (preset == "text") {
        adjacent_hz = 10.0;
        diagonal_hz = 5.0;
      } else {
        throw ConfigError("'noise/preset' must be caption or text");
      }
      for (const Edge& e : out.experiment.register_spec.edges)
        stds.push_back(kTwoPi * (e.diagonal ? diagonal_hz : adjacent_hz));
    }
    for (std::size_t k = 0; k < out.experiment.register_spec.edges.size(); ++k)
      model.edges.push_back(CouplingNoise::EdgeDist{
          out.experiment.register_spec.edges[k].j_mean, stds[k]});
    out.experiment.noise = std::move(model);
  }

  // experiment -----------------------------------------------------------
  const nlohmann::json& exp = doc["experiment"];
  reject_unknown_keys(exp,
                      {"total_time_s", "sample_interval_s", "ensemble", "metric",
                       "reference"},
                      "experiment");
  out.experiment.total_time = require_number(exp, "total_time_s", "experiment");
  out.experiment.sample_interval = require_number(exp, "sample_interval_s", "experiment");
  if (!(out.experiment.total_time >= out.experiment.sample_interval))
    throw ConfigError("'experiment/total_time_s' must be >= sample_interval_s");
  out.experiment.ensemble_size = static_cast<int>(exp.value("ensemble", 8));
  if (out.experiment.ensemble_size < 1)
    throw ConfigError("'experiment/ensemble' must be >= 1");
  const std::string metric = exp.value("metric", "unitary");
  if (metric == "unitary")
    out.experiment.metric = sim::FidelityMetric::unitary;
  else if (metric == "state")
    out.experiment.metric = sim::FidelityMetric::state;
  else
    throw ConfigError("'experiment/metric' must be unitary or state");
  const std::string reference = exp.value("reference", "local-frame");
  if (reference == "local-frame")
    out.experiment.reference = sim::ReferenceFrame::local;
  else if (reference == "lab-frame")
    out.experiment.reference = sim::ReferenceFrame::lab;
  else
    throw ConfigError("'experiment/reference' must be local-frame or lab-frame");

  // output ---------------------------------------------------------------
  const nlohmann::json& output = doc["output"];
  reject_unknown_keys(output, {"directory", "decoupled_csv", "free_csv", "summary_json"},
                      "output");
  out.output.directory = output.value("directory", "out");
  out.output.decoupled_csv = output.value("decoupled_csv", "decoupled.csv");
  out.output.free_csv = output.value("free_csv", "free.csv");
  out.output.summary_json = output.value("summary_json", "summary.json");
  return out;
}

ConfigDocument load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error in '") + path + "': " + e.what());
  }
  return parse_config(doc);
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "' is not of the form dotted.key=value");
  const std::string dotted = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
    if (dot == std::string::npos) {
      nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
      (*node)[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace gpdd::cfg
