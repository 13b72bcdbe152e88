#pragma once

#include <string>
#include <vector>

#include "gpdd/simulator.hpp"

#include "json.hpp"

// CLI configuration: JSON document with register / pulse / noise / experiment /
// output sections. Units in the file are Hz, s, T, m; everything is converted
// to rad/s internally. Unknown keys are rejected.
namespace gpdd::cfg {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputPaths {
  std::string directory = "out";
  std::string decoupled_csv = "decoupled.csv";
  std::string free_csv = "free.csv";
  std::string summary_json = "summary.json";
};

struct ConfigDocument {
  nlohmann::json raw;  // validated document (defaults filled in)
  sim::ExperimentConfig experiment;
  OutputPaths output;
};

/// Built-in defaults: the four-qubit square-lattice configuration
/// (2x2 lattice with diagonals, omega/2pi = 62.8/95.9/120.1/153.18 kHz,
/// J means 17.3/17.9/18.5/19.2/6.1/6.6 Hz, caption noise preset,
/// delta_t = 1e-7 s, theta = 1/20, one iteration, ensemble 8).
nlohmann::json default_config();

/// Parse and validate a document (defaults from default_config() for missing
/// sections/keys, unknown keys rejected with their JSON path).
ConfigDocument parse_config(const nlohmann::json& doc);

ConfigDocument load_config_file(const std::string& path);

/// Apply a `--set dotted.key=value` override; value parsed as JSON when
/// possible, as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

}  // namespace gpdd::cfg
