#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gpdd/schedule.hpp"

#include "json.hpp"

// Exact time-evolution engine and the ensemble fidelity experiment
// (decoupled vs free evolution under shared coupling-noise realizations).
namespace gpdd::sim {

enum class FidelityMetric { unitary, state };
enum class ReferenceFrame { local, lab };

struct ExperimentConfig {
  RegisterSpec register_spec;
  BlockParams params;
  std::optional<CouplingNoise> noise;
  double total_time = 0.0;       // s
  double sample_interval = 0.0;  // s, multiple of the supercycle duration
  int iterations = 1;
  int ensemble_size = 8;
  bool hahn_echo = true;
  FidelityMetric metric = FidelityMetric::unitary;
  ReferenceFrame reference = ReferenceFrame::local;
  std::uint64_t seed = 0;
  std::optional<Vector> initial_state;  // for the state metric; default |+>^N
};

struct FidelityTrace {
  std::vector<double> times;           // s, starting at 0
  std::vector<double> mean_fidelity;   // mean over ensemble, fidelity(0) = 1
  std::vector<std::vector<double>> member_fidelity;  // [member][sample]
  nlohmann::json metadata;
};

struct ExperimentResult {
  FidelityTrace decoupled;
  FidelityTrace free;
  std::vector<std::string> warnings;
};

/// Ordered product of segment propagators and pulse unitaries. With noise,
/// every segment's couplings are redrawn before exponentiation.
UnitaryOperator evolve(const Schedule& schedule, const CouplingNoise* noise,
                       std::mt19937_64& rng);

ExperimentResult run_experiment(const ExperimentConfig& config);

struct DecayFit {
  enum class Model { quadratic, linear };
  Model model = Model::quadratic;
  double rate = 0.0;        // 1/s: lin coefficient, or sqrt of the quad one
  double quad_coeff = 0.0;  // -log f ~ quad_coeff t^2
  double lin_coeff = 0.0;   // -log f ~ lin_coeff t
};

/// Least-squares fit of -log(mean fidelity) on the window where fidelity
/// stays >= 0.5; needs at least 5 samples there.
DecayFit extract_decay_rate(const FidelityTrace& trace);

void write_trace_csv(const std::string& path, const FidelityTrace& trace);
FidelityTrace read_trace_csv(const std::string& path);

}  // namespace gpdd::sim
