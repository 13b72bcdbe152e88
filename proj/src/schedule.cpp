#include "gpdd/schedule.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gpdd {

namespace {

constexpr double kPi = std::numbers::pi;

const SegmentSpec* as_segment(const ScheduleItem& item) {
  return std::get_if<SegmentSpec>(&item);
}

bool is_pi_pulse(const Pulse& p) {
  return std::abs(std::abs(p.angle) - kPi) < 1e-12;
}

// sign picked up by sum_j I_jx under conjugation with the accumulated pulses;
// only pi pulses (or x-axis rotations) keep the drive on the x axis
int drive_frame_sign(const Pulse& p) {
  if (p.axis == PauliAxis::x) return +1;
  if (is_pi_pulse(p)) return -1;
  throw std::invalid_argument(
      "drive offset undefined: accumulated pulse does not map the x drive to +/-x");
}

}  // namespace

Schedule::Schedule(RegisterSpec reg, std::vector<ScheduleItem> items)
    : reg_(std::move(reg)), items_(std::move(items)) {
  for (const ScheduleItem& item : items_) {
    if (const SegmentSpec* seg = as_segment(item)) {
      if (seg->j_values.size() != reg_.edges.size())
        throw std::invalid_argument("segment coupling count does not match register edges");
      if (!(seg->duration > 0.0) || !std::isfinite(seg->duration))
        throw std::invalid_argument("segment duration must be positive and finite");
      for (const SiteTerm& t : seg->site_terms)
        if (t.site < 1 || t.site > reg_.n_qubits)
          throw std::invalid_argument("site term index out of range");
    } else {
      const Pulse& p = std::get<Pulse>(item);
      if (!std::isfinite(p.angle)) throw std::invalid_argument("pulse angle must be finite");
    }
  }
}

double Schedule::total_duration() const {
  double t = 0.0;
  for (const ScheduleItem& item : items_)
    if (const SegmentSpec* seg = as_segment(item)) t += seg->duration;
  return t;
}

std::size_t Schedule::segment_count() const {
  std::size_t n = 0;
  for (const ScheduleItem& item : items_)
    if (as_segment(item)) ++n;
  return n;
}

RegisterOperators::RegisterOperators(const RegisterSpec& reg) {
  const int n = reg.n_qubits;
  n_qubits = n;
  dim = 1 << n;
  zeeman = Matrix::Zero(dim, dim);
  drive_x = Matrix::Zero(dim, dim);
  for (int j = 1; j <= n; ++j) {
    zeeman += reg.omegas[j - 1] * embed_pauli(j, PauliAxis::z, n).matrix();
    drive_x += embed_pauli(j, PauliAxis::x, n).matrix();
  }
  for (const Edge& e : reg.edges) {
    using P = std::pair<int, PauliAxis>;
    const std::array<P, 2> xx{P{e.a, PauliAxis::x}, P{e.b, PauliAxis::x}};
    const std::array<P, 2> yy{P{e.a, PauliAxis::y}, P{e.b, PauliAxis::y}};
    const std::array<P, 2> zz{P{e.a, PauliAxis::z}, P{e.b, PauliAxis::z}};
    edge_xx.push_back(embed_pauli_product(xx, n).matrix());
    edge_yy.push_back(embed_pauli_product(yy, n).matrix());
    edge_zz.push_back(embed_pauli_product(zz, n).matrix());
  }
}

Matrix segment_matrix(const RegisterOperators& ops, const SegmentSpec& seg,
                      std::span<const double> j_override) {
  Matrix h = Matrix::Zero(ops.dim, ops.dim);
  if (seg.zeeman_sign != 0.0) h += seg.zeeman_sign * ops.zeeman;
  if (seg.drive != 0.0) h += seg.drive * ops.drive_x;
  const std::span<const double> j =
      j_override.empty() ? std::span<const double>(seg.j_values) : j_override;
  if (j.size() != ops.edge_zz.size())
    throw std::invalid_argument("coupling override count does not match register edges");
  for (std::size_t e = 0; e < j.size(); ++e) {
    if (j[e] == 0.0) continue;
    if (seg.weights.xx != 0.0) h += j[e] * seg.weights.xx * ops.edge_xx[e];
    if (seg.weights.yy != 0.0) h += j[e] * seg.weights.yy * ops.edge_yy[e];
    if (seg.weights.zz != 0.0) h += j[e] * seg.weights.zz * ops.edge_zz[e];
  }
  for (const SiteTerm& t : seg.site_terms)
    h += t.coeff * embed_pauli(t.site, t.axis, ops.n_qubits).matrix();
  return h;
}

Matrix pulse_matrix(const Pulse& pulse, int n_qubits) {
  return global_rotation(pulse.axis, pulse.angle, n_qubits).matrix();
}

BlockParams BlockParams::from_theta(double delta_t, double theta) {
  if (!(delta_t > 0.0) || !std::isfinite(delta_t))
    throw std::invalid_argument("delta_t must be positive and finite");
  if (!std::isfinite(theta) || theta < 0.0)
    throw std::invalid_argument("theta must be finite and >= 0");
  return BlockParams{delta_t, theta / delta_t, theta};
}

BlockParams BlockParams::from_amplitude(double delta_t, double amplitude) {
  if (!(delta_t > 0.0) || !std::isfinite(delta_t))
    throw std::invalid_argument("delta_t must be positive and finite");
  return BlockParams{delta_t, amplitude, amplitude * delta_t};
}

std::vector<std::string> BlockParams::warnings() const {
  std::vector<std::string> w;
  if (theta > 0.2)
    w.push_back("theta = " + std::to_string(theta) +
                " exceeds the soft limit 0.2; the expansion assumes theta << 1");
  return w;
}

Schedule basic_block(const RegisterSpec& reg, const BlockParams& params) {
  std::array<std::vector<double>, 4> js;
  std::vector<double> means;
  for (const Edge& e : reg.edges) means.push_back(e.j_mean);
  js.fill(means);
  return basic_block(reg, params, js);
}

Schedule basic_block(const RegisterSpec& reg, const BlockParams& params,
                     const std::array<std::vector<double>, 4>& per_segment_j) {
  static constexpr std::array<std::pair<double, double>, 4> kSigns{
      {{+1.0, +1.0}, {-1.0, +1.0}, {-1.0, -1.0}, {+1.0, -1.0}}};
  std::vector<ScheduleItem> items;
  for (int i = 0; i < 4; ++i) {
    const auto [sz, sx] = kSigns[i];
    items.push_back(SegmentSpec{sz, sx * params.amplitude, CouplingWeights{0, 0, 1},
                                per_segment_j[i], params.delta_t});
  }
  Schedule s(reg, std::move(items));
  for (auto& w : params.warnings()) s.add_warning(w);
  return s;
}

namespace {

void require_basic_block_shape(const Schedule& s) {
  if (s.items().size() != 4 || s.segment_count() != 4)
    throw std::invalid_argument("expected a four-segment basic block");
}

}  // namespace

Schedule conjugated_pair(const Schedule& block) { return conjugated_pair(block, block); }

Schedule conjugated_pair(const Schedule& first, const Schedule& second) {
  require_basic_block_shape(first);
  require_basic_block_shape(second);
  if (first.n_qubits() != second.n_qubits())
    throw std::invalid_argument("block register mismatch");
  std::vector<ScheduleItem> items(first.items().begin(), first.items().end());
  items.push_back(Pulse{PauliAxis::y, kPi});
  items.insert(items.end(), second.items().begin(), second.items().end());
  items.push_back(Pulse{PauliAxis::y, -kPi});
  Schedule s(first.reg(), std::move(items));
  for (const auto& w : first.warnings()) s.add_warning(w);
  return s;
}

Schedule repeat(const Schedule& schedule, int k) {
  if (k < 1) throw std::invalid_argument("repeat count must be >= 1");
  std::vector<ScheduleItem> items;
  items.reserve(schedule.items().size() * static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r)
    items.insert(items.end(), schedule.items().begin(), schedule.items().end());
  Schedule out(schedule.reg(), std::move(items));
  for (const auto& w : schedule.warnings()) out.add_warning(w);

  const double total = schedule.total_duration() * k;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const Edge& e : schedule.reg().edges)
    min_gap = std::min(min_gap,
                       std::abs(schedule.reg().omegas[e.a - 1] - schedule.reg().omegas[e.b - 1]));
  if (!schedule.reg().edges.empty() && total * min_gap < 10.0)
    out.add_warning("total duration * min |omega_j - omega_k| = " +
                    std::to_string(total * min_gap) +
                    " < 10; rotating-wave averaging may not have converged");
  return out;
}

Schedule insert_hahn_echo(const Schedule& schedule, PauliAxis axis) {
  const double half = schedule.total_duration() / 2.0;
  const double tol = 1e-12 * std::max(schedule.total_duration(), 1.0);

  std::vector<ScheduleItem> items;
  double elapsed = 0.0;
  bool inserted = false;
  for (const ScheduleItem& item : schedule.items()) {
    if (!inserted && std::abs(elapsed - half) <= tol) {
      items.push_back(Pulse{axis, kPi});
      inserted = true;
    }
    if (const SegmentSpec* seg = as_segment(item)) {
      if (!inserted && elapsed + seg->duration > half + tol) {
        // midpoint falls inside this segment: split it
        SegmentSpec a = *seg;
        SegmentSpec b = *seg;
        a.duration = half - elapsed;
        b.duration = seg->duration - a.duration;
        items.push_back(a);
        items.push_back(Pulse{axis, kPi});
        items.push_back(b);
        inserted = true;
        elapsed += seg->duration;
        continue;
      }
      elapsed += seg->duration;
    }
    items.push_back(item);
  }
  if (!inserted) items.push_back(Pulse{axis, kPi});  // zero-duration schedule
  items.push_back(Pulse{axis, -kPi});
  Schedule out(schedule.reg(), std::move(items));
  for (const auto& w : schedule.warnings()) out.add_warning(w);
  return out;
}

Schedule compile_to_physical(const Schedule& toggled) {
  std::vector<ScheduleItem> items;
  bool flipped = false;  // pi-x frame active
  auto close_frame = [&] {
    if (flipped) {
      items.push_back(Pulse{PauliAxis::x, -kPi});
      flipped = false;
    }
  };
  for (const ScheduleItem& item : toggled.items()) {
    if (const SegmentSpec* seg = as_segment(item)) {
      const double sz = seg->zeeman_sign;
      if (std::abs(sz) > 1e-12 && std::abs(std::abs(sz) - 1.0) > 1e-12)
        throw std::invalid_argument(
            "segment not reachable from the physical set: Zeeman scale " +
            std::to_string(sz) + " is not 0 or +/-1");
      auto frame_transformed = [](const SegmentSpec& in) {
        // physical H = Q H_toggled Q^dag with Q = pi-x: z and y flip, x holds
        SegmentSpec phys = in;
        phys.zeeman_sign = -in.zeeman_sign;
        for (SiteTerm& t : phys.site_terms)
          if (t.axis != PauliAxis::x) t.coeff = -t.coeff;
        return phys;
      };
      if (sz < -0.5) {
        if (!flipped) {
          items.push_back(Pulse{PauliAxis::x, kPi});
          flipped = true;
        }
        items.push_back(frame_transformed(*seg));
      } else if (sz > 0.5) {
        close_frame();
        items.push_back(*seg);
      } else {
        // no Zeeman term: drive and couplings are frame-independent, but any
        // extra site terms still see the open frame
        items.push_back(flipped ? frame_transformed(*seg) : *seg);
      }
    } else {
      close_frame();  // keep pass-through pulses outside the compiler's frame
      items.push_back(item);
    }
  }
  close_frame();
  Schedule out(toggled.reg(), std::move(items));
  for (const auto& w : toggled.warnings()) out.add_warning(w);
  return out;
}

Schedule wahuha_block(const Eigen::MatrixXd& dd_couplings, double delta_t) {
  const int n = static_cast<int>(dd_couplings.rows());
  if (dd_couplings.cols() != n) throw std::invalid_argument("coupling matrix must be square");
  if ((dd_couplings - dd_couplings.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("coupling matrix must be symmetric");
  if (dd_couplings.diagonal().cwiseAbs().maxCoeff() > 0.0)
    throw std::invalid_argument("coupling matrix must have zero diagonal");
  if (!(delta_t > 0.0)) throw std::invalid_argument("delta_t must be positive");

  RegisterSpec reg;
  reg.n_qubits = n;
  reg.omegas.assign(n, 0.0);
  std::vector<double> d;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      reg.edges.push_back(Edge{i, j, dd_couplings(i - 1, j - 1), false});
      d.push_back(dd_couplings(i - 1, j - 1));
    }

  static constexpr std::array<CouplingWeights, 3> kForms{
      CouplingWeights{-1, -1, 2},  // 2 zz - xx - yy
      CouplingWeights{-1, 2, -1},  // 2 yy - xx - zz
      CouplingWeights{2, -1, -1},  // 2 xx - zz - yy
  };
  std::vector<ScheduleItem> items;
  for (const CouplingWeights& w : kForms)
    items.push_back(SegmentSpec{0.0, 0.0, w, d, delta_t});
  return Schedule(reg, std::move(items));
}

namespace {

// add a toggled-frame drive offset: the stored offset carries the sign the
// accumulated pulses impose on the x axis
Schedule add_toggled_drive(const Schedule& schedule, double delta) {
  std::vector<ScheduleItem> items;
  int sign = +1;
  for (const ScheduleItem& item : schedule.items()) {
    if (const SegmentSpec* seg = as_segment(item)) {
      SegmentSpec s = *seg;
      s.drive += sign * delta;
      items.push_back(s);
    } else {
      sign *= drive_frame_sign(std::get<Pulse>(item));
      items.push_back(item);
    }
  }
  Schedule out(schedule.reg(), std::move(items));
  for (const auto& w : schedule.warnings()) out.add_warning(w);
  return out;
}

Schedule wrap_in_pulses(const Schedule& schedule, PauliAxis axis) {
  std::vector<ScheduleItem> items;
  items.push_back(Pulse{axis, kPi});
  items.insert(items.end(), schedule.items().begin(), schedule.items().end());
  items.push_back(Pulse{axis, -kPi});
  Schedule out(schedule.reg(), std::move(items));
  for (const auto& w : schedule.warnings()) out.add_warning(w);
  return out;
}

Schedule concat(const Schedule& a, const Schedule& b) {
  std::vector<ScheduleItem> items(a.items().begin(), a.items().end());
  items.insert(items.end(), b.items().begin(), b.items().end());
  Schedule out(a.reg(), std::move(items));
  for (const auto& w : a.warnings()) out.add_warning(w);
  for (const auto& w : b.warnings()) out.add_warning(w);
  return out;
}

}  // namespace

Schedule supercycle(const RegisterSpec& reg, const BlockParams& params, int iterations) {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  Schedule unit = conjugated_pair(basic_block(reg, params));
  // the pair-pulse axis alternates y, z, y, ... as the construction rotates
  // the surviving Zeeman axis z -> y -> z -> ...
  PauliAxis pair_axis = PauliAxis::z;
  for (int level = 2; level <= iterations; ++level) {
    const double unit_duration = unit.total_duration();
    const double drive = params.theta / unit_duration;
    const Schedule plus = add_toggled_drive(unit, drive);
    const Schedule minus = add_toggled_drive(unit, -drive);
    const Schedule block = concat(concat(plus, wrap_in_pulses(plus, PauliAxis::x)),
                                  concat(wrap_in_pulses(minus, PauliAxis::x), minus));
    std::vector<ScheduleItem> items(block.items().begin(), block.items().end());
    items.push_back(Pulse{pair_axis, kPi});
    items.insert(items.end(), block.items().begin(), block.items().end());
    items.push_back(Pulse{pair_axis, -kPi});
    unit = Schedule(reg, std::move(items));
    pair_axis = pair_axis == PauliAxis::z ? PauliAxis::y : PauliAxis::z;
  }
  return unit;
}

std::vector<magnus::Segment> toggled_segments(const Schedule& schedule) {
  RegisterOperators ops(schedule.reg());
  const int dim = ops.dim;
  Matrix q = Matrix::Identity(dim, dim);
  std::vector<magnus::Segment> out;
  for (const ScheduleItem& item : schedule.items()) {
    if (const SegmentSpec* seg = as_segment(item)) {
      const Matrix h = segment_matrix(ops, *seg);
      out.push_back(magnus::Segment{HermitianOperator(q.adjoint() * h * q), seg->duration});
    } else {
      q = pulse_matrix(std::get<Pulse>(item), schedule.n_qubits()) * q;
    }
  }
  return out;
}

UnitaryOperator accumulated_pulse(const Schedule& schedule) {
  const int dim = 1 << schedule.n_qubits();
  Matrix q = Matrix::Identity(dim, dim);
  for (const ScheduleItem& item : schedule.items())
    if (const Pulse* p = std::get_if<Pulse>(&item))
      q = pulse_matrix(*p, schedule.n_qubits()) * q;
  return UnitaryOperator(q);
}

UnitaryOperator schedule_propagator(const Schedule& schedule) {
  RegisterOperators ops(schedule.reg());
  Matrix u = Matrix::Identity(ops.dim, ops.dim);
  for (const ScheduleItem& item : schedule.items()) {
    if (const SegmentSpec* seg = as_segment(item))
      u = propagator_matrix(segment_matrix(ops, *seg), seg->duration) * u;
    else
      u = pulse_matrix(std::get<Pulse>(item), schedule.n_qubits()) * u;
  }
  return UnitaryOperator(u);
}

nlohmann::json schedule_to_json(const Schedule& schedule) {
  nlohmann::json j;
  j["n_qubits"] = schedule.n_qubits();
  j["omegas_rad_s"] = schedule.reg().omegas;
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : schedule.reg().edges)
    edges.push_back({{"a", e.a}, {"b", e.b}, {"j_mean_rad_s", e.j_mean}, {"diagonal", e.diagonal}});
  j["edges"] = edges;
  nlohmann::json items = nlohmann::json::array();
  for (const ScheduleItem& item : schedule.items()) {
    if (const SegmentSpec* seg = as_segment(item)) {
      nlohmann::json site_terms = nlohmann::json::array();
      for (const SiteTerm& t : seg->site_terms)
        site_terms.push_back(
            {{"site", t.site}, {"axis", axis_name(t.axis)}, {"coeff_rad_s", t.coeff}});
      items.push_back({{"type", "segment"},
                       {"zeeman_sign", seg->zeeman_sign},
                       {"drive_rad_s", seg->drive},
                       {"coupling_weights", {{"xx", seg->weights.xx},
                                             {"yy", seg->weights.yy},
                                             {"zz", seg->weights.zz}}},
                       {"j_rad_s", seg->j_values},
                       {"duration_s", seg->duration},
                       {"site_terms", site_terms}});
    } else {
      const Pulse& p = std::get<Pulse>(item);
      items.push_back(
          {{"type", "pulse"}, {"axis", axis_name(p.axis)}, {"angle_rad", p.angle}});
    }
  }
  j["items"] = items;
  return j;
}

Schedule schedule_from_json(const nlohmann::json& j) {
  RegisterSpec reg;
  reg.n_qubits = j.at("n_qubits").get<int>();
  reg.omegas = j.at("omegas_rad_s").get<std::vector<double>>();
  for (const auto& e : j.at("edges"))
    reg.edges.push_back(Edge{e.at("a").get<int>(), e.at("b").get<int>(),
                             e.at("j_mean_rad_s").get<double>(),
                             e.value("diagonal", false)});
  std::vector<ScheduleItem> items;
  for (const auto& it : j.at("items")) {
    const std::string type = it.at("type").get<std::string>();
    if (type == "segment") {
      const auto& w = it.at("coupling_weights");
      std::vector<SiteTerm> site_terms;
      for (const auto& t : it.value("site_terms", nlohmann::json::array()))
        site_terms.push_back(SiteTerm{t.at("site").get<int>(),
                                      axis_from_name(t.at("axis").get<std::string>()),
                                      t.at("coeff_rad_s").get<double>()});
      items.push_back(SegmentSpec{it.at("zeeman_sign").get<double>(),
                                  it.at("drive_rad_s").get<double>(),
                                  CouplingWeights{w.at("xx").get<double>(),
                                                  w.at("yy").get<double>(),
                                                  w.at("zz").get<double>()},
                                  it.at("j_rad_s").get<std::vector<double>>(),
                                  it.at("duration_s").get<double>(),
                                  std::move(site_terms)});
    } else if (type == "pulse") {
      items.push_back(
          Pulse{axis_from_name(it.at("axis").get<std::string>()), it.at("angle_rad").get<double>()});
    } else {
      throw std::invalid_argument("unknown schedule item type '" + type + "'");
    }
  }
  return Schedule(std::move(reg), std::move(items));
}

}  // namespace gpdd
