#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gpdd/magnus.hpp"
#include "gpdd/operators.hpp"
#include "gpdd/registers.hpp"

#include "json.hpp"

// Pulse-sequence IR: an ordered list of continuous-evolution segments and
// instantaneous global rotations. A schedule's meaning is its total
// propagator, items applied in list order.
namespace gpdd {

// per-edge two-site coupling operator: xx*XX + yy*YY + zz*ZZ (spin-1/2 ops)
struct CouplingWeights {
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;
};

// additional single-site term coeff * I_{site,axis}
struct SiteTerm {
  int site = 1;  // 1-based
  PauliAxis axis = PauliAxis::z;
  double coeff = 0.0;  // rad/s
};

// Hamiltonian of a segment:
//   zeeman_sign * sum_j omega_j I_jz  +  drive * sum_j I_jx
//   + sum_e j_values[e] * (weights-coupling operator on edge e)
//   + sum of site_terms
struct SegmentSpec {
  double zeeman_sign = 1.0;
  double drive = 0.0;  // rad/s, signed
  CouplingWeights weights{0.0, 0.0, 1.0};
  std::vector<double> j_values;  // rad/s, one per register edge
  double duration = 0.0;         // s
  std::vector<SiteTerm> site_terms;
};

struct Pulse {
  PauliAxis axis = PauliAxis::x;
  double angle = 0.0;  // rad; zero duration (infinitely narrow)
};

using ScheduleItem = std::variant<SegmentSpec, Pulse>;

class Schedule {
 public:
  Schedule(RegisterSpec reg, std::vector<ScheduleItem> items);

  const RegisterSpec& reg() const { return reg_; }
  int n_qubits() const { return reg_.n_qubits; }
  const std::vector<ScheduleItem>& items() const { return items_; }
  double total_duration() const;
  std::size_t segment_count() const;

  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  RegisterSpec reg_;
  std::vector<ScheduleItem> items_;
  std::vector<std::string> warnings_;
};

// Prebuilt register operators shared across segment-matrix assemblies.
struct RegisterOperators {
  explicit RegisterOperators(const RegisterSpec& reg);
  int n_qubits;
  int dim;
  Matrix zeeman;   // sum_j omega_j I_jz
  Matrix drive_x;  // sum_j I_jx
  std::vector<Matrix> edge_xx, edge_yy, edge_zz;
};

/// Segment Hamiltonian; `j_override` (one value per edge) replaces the stored
/// couplings, which is how per-segment noise draws enter.
Matrix segment_matrix(const RegisterOperators& ops, const SegmentSpec& seg,
                      std::span<const double> j_override = {});

Matrix pulse_matrix(const Pulse& pulse, int n_qubits);

struct BlockParams {
  double delta_t = 0.0;   // s
  double amplitude = 0.0; // rad/s
  double theta = 0.0;     // amplitude * delta_t

  static BlockParams from_theta(double delta_t, double theta);
  static BlockParams from_amplitude(double delta_t, double amplitude);
  std::vector<std::string> warnings() const;  // theta > 0.2 soft limit
};

/// Four toggled-frame periods of duration delta_t:
///   H1 = +Z + C + A X,  H2 = -Z + C + A X,  H3 = -Z + C - A X,  H4 = +Z + C - A X.
Schedule basic_block(const RegisterSpec& reg, const BlockParams& params);

/// Same, with an independent per-edge coupling assignment for each period.
Schedule basic_block(const RegisterSpec& reg, const BlockParams& params,
                     const std::array<std::vector<double>, 4>& per_segment_j);

/// Block, +pi-y pulse, block again, closing -pi-y pulse: the second block is
/// conjugated by the pulses, flipping the sign-odd first-order terms.
Schedule conjugated_pair(const Schedule& block);

/// Pair with independent couplings in the two halves (first executes `first`).
Schedule conjugated_pair(const Schedule& first, const Schedule& second);

/// k-fold concatenation; warns when 8k delta_t |omega_j - omega_k| < 10 for a
/// coupled pair (rotating-wave validity heuristic).
Schedule repeat(const Schedule& schedule, int k);

/// Global pi pulse about `axis` at the midpoint, closing -pi pulse at the end.
/// If the midpoint falls inside a segment, that segment is split.
Schedule insert_hahn_echo(const Schedule& schedule, PauliAxis axis);

/// Rewrite sign-flipped Zeeman segments into physical (+Z) segments bracketed
/// by pi-x frame pulses (alternating sign so the accumulated pulse product is
/// exactly the identity over the cycle). Pass-through pulses close the frame
/// first. Total propagator is preserved exactly.
Schedule compile_to_physical(const Schedule& toggled);

/// Three equal-duration segments of the dipolar decoupling block
/// (2zz-xx-yy, 2yy-xx-zz, 2xx-zz-yy per edge); their order-0 average is zero.
Schedule wahuha_block(const Eigen::MatrixXd& dd_couplings, double delta_t);

/// Decoupling supercycle: iterations = 1 gives conjugated_pair(basic_block);
/// each further iteration rebuilds the four-period pattern out of the previous
/// level's units (drive offset added to every segment, Zeeman-axis flips via
/// wrapping pi pulses about the drive axis, pair pulses about the axis the
/// construction rotates to next).
Schedule supercycle(const RegisterSpec& reg, const BlockParams& params, int iterations);

// analysis views -------------------------------------------------------------

/// Toggled-frame segments: pulse conjugations folded into the Hamiltonians.
/// The total propagator equals accumulated_pulse * product of segment
/// propagators.
std::vector<magnus::Segment> toggled_segments(const Schedule& schedule);

/// Product of the pulse unitaries only (identity up to phase for cyclic
/// schedules).
UnitaryOperator accumulated_pulse(const Schedule& schedule);

/// Ordered product of all item unitaries (exact noise-free propagator).
UnitaryOperator schedule_propagator(const Schedule& schedule);

// serialization ---------------------------------------------------------------

nlohmann::json schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const nlohmann::json& j);

}  // namespace gpdd
