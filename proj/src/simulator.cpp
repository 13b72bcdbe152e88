#include "gpdd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gpdd::sim {

namespace {

constexpr const char* kVersion = "gpdd 0.1.0";

bool near_integer_multiple(double value, double unit, long long* count) {
  if (!(unit > 0.0)) return false;
  const double q = value / unit;
  const long long k = std::llround(q);
  if (k < 1) return false;
  if (std::abs(q - static_cast<double>(k)) > 1e-9 * std::max(1.0, q)) return false;
  if (count) *count = k;
  return true;
}

bool segment_is_diagonal(const SegmentSpec& seg) {
  return seg.drive == 0.0 && seg.weights.xx == 0.0 && seg.weights.yy == 0.0;
}

// propagator memo for noise-free walks; keyed on the segment's defining values
struct SegmentPropagatorCache {
  std::map<std::vector<double>, Matrix> memo;

  const Matrix& get(const RegisterOperators& ops, const SegmentSpec& seg) {
    std::vector<double> key;
    key.reserve(6 + seg.j_values.size());
    key.push_back(seg.zeeman_sign);
    key.push_back(seg.drive);
    key.push_back(seg.weights.xx);
    key.push_back(seg.weights.yy);
    key.push_back(seg.weights.zz);
    key.push_back(seg.duration);
    key.insert(key.end(), seg.j_values.begin(), seg.j_values.end());
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    return memo.emplace(std::move(key), segment_propagator(ops, seg, {})).first->second;
  }

  static Matrix segment_propagator(const RegisterOperators& ops, const SegmentSpec& seg,
                                   std::span<const double> j_override) {
    const Matrix h = segment_matrix(ops, seg, j_override);
    if (segment_is_diagonal(seg)) {
      Vector phases(h.rows());
      for (Eigen::Index k = 0; k < h.rows(); ++k)
        phases(k) = std::exp(Complex(0, -h(k, k).real() * seg.duration));
      return Matrix(phases.asDiagonal());
    }
    return propagator_matrix(h, seg.duration);
  }
};

struct MetricEvaluator {
  FidelityMetric metric;
  ReferenceFrame reference;
  Vector psi;

  double operator()(const Matrix& u, const Matrix& u_ref) const {
    const double d = static_cast<double>(u.rows());
    switch (metric) {
      case FidelityMetric::unitary: {
        const Complex tr = reference == ReferenceFrame::local
                               ? (u * u_ref.adjoint()).trace()
                               : u.trace();
        return std::min(1.0, std::norm(tr) / (d * d));
      }
      case FidelityMetric::state: {
        const Vector evolved = reference == ReferenceFrame::local
                                   ? Vector(u_ref.adjoint() * (u * psi))
                                   : Vector(u * psi);
        return std::min(1.0, std::norm(psi.dot(evolved)));
      }
    }
    return 0.0;
  }
};

// walk the schedule, multiplying up the propagator and emitting a snapshot at
// every sample boundary; draws one coupling vector per segment when noisy
std::vector<Matrix> walk_samples(const Schedule& schedule, const RegisterOperators& ops,
                                 const CouplingNoise* noise, std::mt19937_64& rng,
                                 double sample_interval, int n_samples,
                                 SegmentPropagatorCache* cache) {
  const int dim = ops.dim;
  Matrix u = Matrix::Identity(dim, dim);
  std::vector<Matrix> snapshots;
  snapshots.reserve(n_samples);
  double elapsed = 0.0;
  int next_sample = 1;
  double min_dt = std::numeric_limits<double>::infinity();
  for (const ScheduleItem& item : schedule.items())
    if (const SegmentSpec* seg = std::get_if<SegmentSpec>(&item))
      min_dt = std::min(min_dt, seg->duration);
  const double tol = 0.25 * min_dt;

  std::vector<double> draws;
  for (const ScheduleItem& item : schedule.items()) {
    if (const SegmentSpec* seg = std::get_if<SegmentSpec>(&item)) {
      if (noise) {
        draws = sample_couplings(*noise, rng);
        u = SegmentPropagatorCache::segment_propagator(ops, *seg, draws) * u;
      } else if (cache) {
        u = cache->get(ops, *seg) * u;
      } else {
        u = SegmentPropagatorCache::segment_propagator(ops, *seg, {}) * u;
      }
      elapsed += seg->duration;
      if (next_sample <= n_samples &&
          elapsed >= next_sample * sample_interval - tol) {
        snapshots.push_back(u);
        ++next_sample;
      }
    } else {
      u = pulse_matrix(std::get<Pulse>(item), schedule.n_qubits()) * u;
    }
  }
  if (static_cast<int>(snapshots.size()) != n_samples)
    throw std::runtime_error("schedule did not cover the requested sample grid");
  return snapshots;
}

Schedule free_schedule(const RegisterSpec& reg, double delta_t, long long n_segments) {
  std::vector<double> means;
  for (const Edge& e : reg.edges) means.push_back(e.j_mean);
  std::vector<ScheduleItem> items;
  items.reserve(static_cast<std::size_t>(n_segments));
  for (long long i = 0; i < n_segments; ++i)
    items.push_back(SegmentSpec{1.0, 0.0, CouplingWeights{0, 0, 1}, means, delta_t});
  return Schedule(reg, std::move(items));
}

Schedule strip_couplings(const Schedule& schedule) {
  std::vector<ScheduleItem> items(schedule.items().begin(), schedule.items().end());
  for (ScheduleItem& item : items)
    if (SegmentSpec* seg = std::get_if<SegmentSpec>(&item))
      std::fill(seg->j_values.begin(), seg->j_values.end(), 0.0);
  return Schedule(schedule.reg(), std::move(items));
}

Vector plus_state(int n_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  Vector psi = Vector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0));
  return psi;
}

nlohmann::json config_echo(const ExperimentConfig& c) {
  nlohmann::json j;
  j["n_qubits"] = c.register_spec.n_qubits;
  j["omegas_rad_s"] = c.register_spec.omegas;
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : c.register_spec.edges)
    edges.push_back({{"a", e.a}, {"b", e.b}, {"j_mean_rad_s", e.j_mean}});
  j["edges"] = edges;
  j["delta_t_s"] = c.params.delta_t;
  j["theta"] = c.params.theta;
  j["iterations"] = c.iterations;
  j["hahn_echo"] = c.hahn_echo;
  j["total_time_s"] = c.total_time;
  j["sample_interval_s"] = c.sample_interval;
  j["ensemble"] = c.ensemble_size;
  j["metric"] = c.metric == FidelityMetric::unitary ? "unitary" : "state";
  j["reference"] = c.reference == ReferenceFrame::local ? "local-frame" : "lab-frame";
  j["seed"] = c.seed;
  if (c.noise) {
    nlohmann::json n = nlohmann::json::array();
    for (const auto& e : c.noise->edges)
      n.push_back({{"mean_rad_s", e.mean}, {"std_rad_s", e.stddev}});
    j["noise"] = n;
  } else {
    j["noise"] = nullptr;
  }
  return j;
}

}  // namespace

UnitaryOperator evolve(const Schedule& schedule, const CouplingNoise* noise,
                       std::mt19937_64& rng) {
  RegisterOperators ops(schedule.reg());
  Matrix u = Matrix::Identity(ops.dim, ops.dim);
  std::vector<double> draws;
  for (const ScheduleItem& item : schedule.items()) {
    if (const SegmentSpec* seg = std::get_if<SegmentSpec>(&item)) {
      std::span<const double> j{};
      if (noise) {
        draws = sample_couplings(*noise, rng);
        j = draws;
      }
      u = propagator_matrix(segment_matrix(ops, *seg, j), seg->duration) * u;
    } else {
      u = pulse_matrix(std::get<Pulse>(item), schedule.n_qubits()) * u;
    }
  }
  return UnitaryOperator(u);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const RegisterSpec& reg = config.register_spec;
  if (reg.n_qubits < 1) throw std::invalid_argument("empty register");
  if (config.ensemble_size < 1) throw std::invalid_argument("ensemble size must be >= 1");
  if (config.noise && config.noise->edges.size() != reg.edges.size())
    throw std::invalid_argument("noise model edge count does not match register");

  const Schedule unit = supercycle(reg, config.params, config.iterations);
  const double unit_duration = unit.total_duration();

  long long units_per_sample = 0;
  if (!near_integer_multiple(config.sample_interval, unit_duration, &units_per_sample))
    throw std::invalid_argument("sample_interval must be a positive multiple of the supercycle duration " +
                                std::to_string(unit_duration) + " s");
  long long n_samples_ll = 0;
  if (!near_integer_multiple(config.total_time, config.sample_interval, &n_samples_ll))
    throw std::invalid_argument("total_time must be a positive multiple of sample_interval");
  const int n_samples = static_cast<int>(n_samples_ll);
  if (units_per_sample * n_samples_ll > 50'000'000LL)
    throw std::invalid_argument("schedule too long: more than 5e7 supercycles requested");

  Schedule decoupled = repeat(unit, static_cast<int>(units_per_sample * n_samples));
  if (config.hahn_echo) decoupled = insert_hahn_echo(decoupled, PauliAxis::x);
  decoupled = compile_to_physical(decoupled);

  const long long free_segments =
      std::llround(config.total_time / config.params.delta_t);
  const Schedule free = free_schedule(reg, config.params.delta_t, free_segments);

  RegisterOperators ops(reg);
  SegmentPropagatorCache ref_cache;

  // local-frame references: same schedules with all couplings removed
  std::vector<Matrix> ref_dec, ref_free;
  {
    std::mt19937_64 dummy(0);
    ref_dec = walk_samples(strip_couplings(decoupled), ops, nullptr, dummy,
                           config.sample_interval, n_samples, &ref_cache);
    ref_free = walk_samples(strip_couplings(free), ops, nullptr, dummy,
                            config.sample_interval, n_samples, &ref_cache);
  }

  MetricEvaluator eval{config.metric, config.reference,
                       config.initial_state ? *config.initial_state
                                            : plus_state(reg.n_qubits)};
  if (config.metric == FidelityMetric::state &&
      std::abs(eval.psi.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("initial state is not normalized");

  const bool noisy = config.noise.has_value();
  const int members = noisy ? config.ensemble_size : 1;

  struct MemberResult {
    std::vector<double> dec, fre;
  };
  auto run_member = [&](int m) {
    SegmentPropagatorCache cache;  // per-thread memo for the noise-free path
    std::mt19937_64 rng_dec = member_rng(config.seed, static_cast<std::uint64_t>(m));
    std::mt19937_64 rng_free = member_rng(config.seed, static_cast<std::uint64_t>(m));
    const CouplingNoise* noise = noisy ? &*config.noise : nullptr;
    const auto snap_dec = walk_samples(decoupled, ops, noise, rng_dec,
                                       config.sample_interval, n_samples, &cache);
    const auto snap_free = walk_samples(free, ops, noise, rng_free,
                                        config.sample_interval, n_samples, &cache);
    MemberResult r;
    r.dec.push_back(1.0);
    r.fre.push_back(1.0);
    for (int s = 0; s < n_samples; ++s) {
      r.dec.push_back(eval(snap_dec[s], ref_dec[s]));
      r.fre.push_back(eval(snap_free[s], ref_free[s]));
    }
    return r;
  };

  std::vector<MemberResult> results(static_cast<std::size_t>(members));
  if (members > 1) {
    std::vector<std::future<MemberResult>> futures;
    futures.reserve(static_cast<std::size_t>(members));
    for (int m = 0; m < members; ++m)
      futures.push_back(std::async(std::launch::async, run_member, m));
    for (int m = 0; m < members; ++m) results[m] = futures[m].get();
  } else {
    results[0] = run_member(0);
  }

  ExperimentResult out;
  for (const auto& w : unit.warnings()) out.warnings.push_back(w);
  for (const auto& w : decoupled.warnings()) out.warnings.push_back(w);
  for (const auto& w : check_register(reg)) out.warnings.push_back(w);

  const int reported_members = config.ensemble_size;
  auto fill_trace = [&](FidelityTrace& tr, bool dec) {
    tr.times.resize(static_cast<std::size_t>(n_samples) + 1);
    for (int s = 0; s <= n_samples; ++s) tr.times[s] = s * config.sample_interval;
    tr.member_fidelity.resize(static_cast<std::size_t>(reported_members));
    for (int m = 0; m < reported_members; ++m)
      tr.member_fidelity[m] = dec ? results[std::min(m, members - 1)].dec
                                  : results[std::min(m, members - 1)].fre;
    tr.mean_fidelity.assign(tr.times.size(), 0.0);
    for (std::size_t s = 0; s < tr.times.size(); ++s) {
      double acc = 0.0;
      for (int m = 0; m < reported_members; ++m) acc += tr.member_fidelity[m][s];
      tr.mean_fidelity[s] = acc / reported_members;
    }
    tr.metadata = config_echo(config);
    tr.metadata["trace"] = dec ? "decoupled" : "free";
    tr.metadata["version"] = kVersion;
  };
  fill_trace(out.decoupled, true);
  fill_trace(out.free, false);
  return out;
}

DecayFit extract_decay_rate(const FidelityTrace& trace) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] <= 0.0) continue;
    if (trace.mean_fidelity[i] < 0.5) break;  // fit window: prefix with f >= 0.5
    t.push_back(trace.times[i]);
    y.push_back(-std::log(std::max(trace.mean_fidelity[i], 1e-300)));
  }
  if (t.size() < 5)
    throw std::invalid_argument("degenerate fit window: need >= 5 samples with fidelity >= 0.5");

  double st2 = 0, st4 = 0, syt = 0, syt2 = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st2 += t[i] * t[i];
    st4 += t[i] * t[i] * t[i] * t[i];
    syt += y[i] * t[i];
    syt2 += y[i] * t[i] * t[i];
  }
  DecayFit fit;
  fit.lin_coeff = syt / st2;
  fit.quad_coeff = syt2 / st4;
  double sse_lin = 0, sse_quad = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double rl = y[i] - fit.lin_coeff * t[i];
    const double rq = y[i] - fit.quad_coeff * t[i] * t[i];
    sse_lin += rl * rl;
    sse_quad += rq * rq;
  }
  if (sse_quad <= sse_lin) {
    fit.model = DecayFit::Model::quadratic;
    fit.rate = std::sqrt(std::max(fit.quad_coeff, 0.0));
  } else {
    fit.model = DecayFit::Model::linear;
    fit.rate = std::max(fit.lin_coeff, 0.0);
  }
  return fit;
}

void write_trace_csv(const std::string& path, const FidelityTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "# config: " << trace.metadata.dump() << "\n";
  if (trace.metadata.contains("seed"))
    out << "# seed: " << trace.metadata["seed"].dump() << "\n";
  out << "# version: " << kVersion << "\n";
  out << "time_s,mean_fidelity";
  for (std::size_t m = 0; m < trace.member_fidelity.size(); ++m) out << ",member_" << m;
  out << "\n";
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (std::size_t s = 0; s < trace.times.size(); ++s) {
    out << fmt(trace.times[s]) << "," << fmt(trace.mean_fidelity[s]);
    for (const auto& member : trace.member_fidelity) out << "," << fmt(member[s]);
    out << "\n";
  }
}

FidelityTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  FidelityTrace tr;
  std::string line;
  bool header_seen = false;
  std::size_t members = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("# config: ");
      if (pos == 0) tr.metadata = nlohmann::json::parse(line.substr(10));
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      members = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) >= 1
                    ? static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) - 1
                    : 0;
      tr.member_fidelity.resize(members);
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != members + 2) throw std::runtime_error("malformed trace row");
    tr.times.push_back(row[0]);
    tr.mean_fidelity.push_back(row[1]);
    for (std::size_t m = 0; m < members; ++m) tr.member_fidelity[m].push_back(row[2 + m]);
  }
  if (tr.times.empty()) throw std::runtime_error("empty trace file");
  return tr;
}

}  // namespace gpdd::sim
