#include "gpdd/verify.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

#include "gpdd/effective.hpp"
#include "gpdd/magnus.hpp"
#include "gpdd/schedule.hpp"
#include "gpdd/simulator.hpp"

namespace gpdd::verify {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

RegisterSpec two_qubit_register(double j_hz = 17.3) {
  RegisterSpec reg;
  reg.n_qubits = 2;
  reg.omegas = {kTwoPi * 62.8e3, kTwoPi * 95.9e3};
  reg.edges = {Edge{1, 2, kTwoPi * j_hz, false}};
  return reg;
}

double rel_norm(const HermitianOperator& a, const HermitianOperator& b) {
  const double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
  return (a - b).max_abs() / scale;
}

// residual of an analytic form against the exact generator of its schedule
double form_residual(const effective::EffectiveForm& form, const Schedule& schedule) {
  const auto segs = toggled_segments(schedule);
  const HermitianOperator exact = magnus::exact_generator(segs);
  return (form.to_operator(schedule.n_qubits()) - exact).max_abs();
}

// worst deviation of the per-halving residual ratio from the cubic value 8
template <typename MakeResidual>
double cubic_ratio_deviation(MakeResidual&& residual_at) {
  const std::array<double, 3> thetas{0.04, 0.02, 0.01};
  std::array<double, 3> r{};
  for (std::size_t i = 0; i < thetas.size(); ++i) r[i] = residual_at(thetas[i]);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < thetas.size(); ++i)
    worst = std::max(worst, std::abs(r[i] / r[i + 1] - 8.0));
  return worst;
}

constexpr double kAmplitude = 5e5;  // rad/s; theta realized through delta_t

Schedule block_for(const RegisterSpec& reg, double theta,
                   const std::array<double, 4>* js = nullptr) {
  const BlockParams params = BlockParams::from_amplitude(theta / kAmplitude, kAmplitude);
  if (!js) return basic_block(reg, params);
  std::array<std::vector<double>, 4> per_segment;
  for (int i = 0; i < 4; ++i) per_segment[i] = {(*js)[i]};
  return basic_block(reg, params, per_segment);
}

Schedule pair_for(const RegisterSpec& reg, double theta,
                  const std::array<double, 8>* js = nullptr) {
  if (!js) return conjugated_pair(block_for(reg, theta));
  const std::array<double, 4> first{(*js)[0], (*js)[1], (*js)[2], (*js)[3]};
  const std::array<double, 4> second{(*js)[4], (*js)[5], (*js)[6], (*js)[7]};
  return conjugated_pair(block_for(reg, theta, &first), block_for(reg, theta, &second));
}

}  // namespace

std::vector<Check> run_magnus_checks() {
  std::vector<Check> out;
  std::mt19937_64 rng(20240901);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto random_herm = [&](int dim, double scale) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k) m(i, k) = Complex(gauss(rng), gauss(rng));
    return HermitianOperator(Matrix(scale * 0.5 * (m + m.adjoint())));
  };

  {  // constant Hamiltonian: order0 = H, higher orders vanish
    const HermitianOperator h = random_herm(4, 1.0);
    const std::vector<magnus::Segment> segs{{h, 0.3}};
    const auto res = magnus::magnus_terms(segs);
    const double dev = std::max({rel_norm(res.order0, h),
                                 res.order1.max_abs() / h.max_abs(),
                                 res.order2.max_abs() / h.max_abs()});
    out.push_back({"magnus.single-segment", dev, 1e-12, false, "order0=H"});
  }
  {  // commuting segments: all commutator terms vanish
    const HermitianOperator a = embed_pauli(1, PauliAxis::z, 2);
    const HermitianOperator b =
        embed_pauli_product(std::array{std::pair{1, PauliAxis::z}, std::pair{2, PauliAxis::z}}, 2);
    const std::vector<magnus::Segment> segs{{a, 0.2}, {b, 0.4}};
    const auto res = magnus::magnus_terms(segs);
    out.push_back({"magnus.commuting", res.order1.max_abs() + res.order2.max_abs(), 1e-14,
                   false, "order1=order2=0"});
  }
  {  // truncation-order scaling: residual after orders<=n shrinks as s^{n+1}
    std::vector<magnus::Segment> base;
    for (int i = 0; i < 3; ++i) base.push_back({random_herm(4, 1.0), 0.17 + 0.06 * i});
    auto residual = [&](int order, double s) {
      std::vector<magnus::Segment> segs = base;
      for (auto& seg : segs) seg.duration *= s;
      const auto res = magnus::magnus_terms(segs);
      const HermitianOperator exact = magnus::exact_generator(segs);
      HermitianOperator acc = res.order0;
      if (order >= 1) acc += res.order1;
      if (order >= 2) acc += res.order2;
      return (exact - acc).max_abs();
    };
    for (int order = 0; order <= 2; ++order) {
      const double ratio = residual(order, 0.2) / residual(order, 0.1);
      const double expected = std::pow(2.0, order + 1);
      out.push_back({"magnus.scaling.order" + std::to_string(order),
                     std::abs(ratio - expected), 0.3 * expected, false,
                     "residual~s^" + std::to_string(order + 1)});
    }
  }
  {  // covariance under a fixed conjugation
    const UnitaryOperator u = global_rotation(PauliAxis::y, 0.7, 2);
    std::vector<magnus::Segment> segs;
    for (int i = 0; i < 3; ++i) segs.push_back({random_herm(4, 1.0), 0.08 + 0.05 * i});
    std::vector<magnus::Segment> conj_segs;
    for (const auto& s : segs) conj_segs.push_back({conjugate(s.hamiltonian, u), s.duration});
    const HermitianOperator lhs = magnus::magnus_terms(conj_segs).sum();
    const HermitianOperator rhs = conjugate(magnus::magnus_terms(segs).sum(), u);
    out.push_back({"magnus.covariance", rel_norm(lhs, rhs), 1e-10, false,
                   "conjugation commutes with averaging"});
  }
  {  // time-symmetric concatenation kills the first order
    std::vector<magnus::Segment> segs;
    for (int i = 0; i < 3; ++i) segs.push_back({random_herm(4, 1.0), 0.05 + 0.03 * i});
    std::vector<magnus::Segment> sym = segs;
    sym.insert(sym.end(), segs.rbegin(), segs.rend());
    const auto res = magnus::magnus_terms(sym);
    out.push_back({"magnus.time-reversal", res.order1.max_abs() / res.order0.max_abs(),
                   1e-12, false, "symmetric cycle: order1=0"});
  }
  return out;
}

std::vector<Check> run_effective_checks() {
  std::vector<Check> out;
  const RegisterSpec reg = two_qubit_register();
  const double j = reg.edges[0].j_mean;

  out.push_back({"effective.h1eff-cubic", cubic_ratio_deviation([&](double th) {
                   return form_residual(effective::h1eff_analytic(reg, th, j),
                                        block_for(reg, th));
                 }),
                 2.0, false, "h1eff"});
  out.push_back({"effective.h2eff-cubic", cubic_ratio_deviation([&](double th) {
                   return form_residual(effective::h2eff_analytic(reg, th, j),
                                        pair_for(reg, th));
                 }),
                 2.0, false, "h2eff"});

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> jdist(kTwoPi * 10.0, kTwoPi * 25.0);
  std::array<double, 4> j4{};
  for (double& v : j4) v = jdist(rng);
  out.push_back({"effective.h1eff-fluct-cubic", cubic_ratio_deviation([&](double th) {
                   return form_residual(effective::h1eff_fluct_analytic(reg, th, j4),
                                        block_for(reg, th, &j4));
                 }),
                 2.0, false, "h1eff-fluct"});
  std::array<double, 8> j8{};
  for (double& v : j8) v = jdist(rng);
  out.push_back({"effective.h2eff-fluct-cubic", cubic_ratio_deviation([&](double th) {
                   return form_residual(effective::h2eff_fluct_analytic(reg, th, j8),
                                        pair_for(reg, th, &j8));
                 }),
                 2.0, false, "h2eff-fluct"});

  {  // coupling-reduction factor at theta = 1/20: yy coefficient / J = (4/3) theta^2
    const double theta = 0.05;
    const auto segs = toggled_segments(pair_for(reg, theta));
    const HermitianOperator hbar = magnus::exact_generator(segs);
    const double cyy = pauli_coefficient(
        hbar, std::array{std::pair{1, PauliAxis::y}, std::pair{2, PauliAxis::y}});
    const double target = 4.0 / 3.0 * theta * theta;
    out.push_back({"effective.reduction-factor", std::abs(cyy / j - target) / target, 0.10,
                   false, "yy/J=(4/3)theta^2~1/300"});
  }
  {  // rotating-wave reduction of h2eff reproduces h3eff exactly
    const double theta = 0.05;
    const HermitianOperator h2 = effective::h2eff_analytic(reg, theta, j).to_operator(2);
    HermitianOperator dom = HermitianOperator::zero(2);
    dom += (-theta / 2 * reg.omegas[0]) * embed_pauli(1, PauliAxis::y, 2);
    dom += (-theta / 2 * reg.omegas[1]) * embed_pauli(2, PauliAxis::y, 2);
    const HermitianOperator projected = effective::secular_projection(h2, dom);
    const HermitianOperator h3 = effective::h3eff_analytic(reg, theta, j).to_operator(2);
    out.push_back({"effective.h3eff-projection", rel_norm(projected, h3), 1e-10, false,
                   "secular(h2eff)=h3eff"});
  }
  {  // idempotence of the projection on a random pair
    std::mt19937_64 prng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(4, 4), d(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        m(i, k) = Complex(g(prng), g(prng));
        d(i, k) = Complex(g(prng), g(prng));
      }
    const HermitianOperator hf{Matrix(0.5 * (m + m.adjoint()))};
    const HermitianOperator hd{Matrix(0.5 * (d + d.adjoint()))};
    const HermitianOperator once = effective::secular_projection(hf, hd);
    const HermitianOperator twice = effective::secular_projection(once, hd);
    const double idem = rel_norm(once, twice);
    const double shrink = once.frobenius_norm() <= hf.frobenius_norm() * (1 + 1e-12) ? 0.0 : 1.0;
    out.push_back({"effective.secular-idempotent", idem + shrink, 1e-12, false,
                   "projection idempotent, norm nonincreasing"});
  }
  return out;
}

std::vector<Check> run_wahuha_checks() {
  std::vector<Check> out;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  double worst = 0.0;
  for (int n = 2; n <= 4; ++n) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) d(i, k) = d(k, i) = dist(rng);
    const Schedule block = wahuha_block(d, 1e-3);
    const auto segs = toggled_segments(block);
    worst = std::max(worst, magnus::magnus_terms(segs).order0.max_abs());
  }
  out.push_back({"wahuha.zero-average", worst, 1e-14, false, "H1dd+H2dd+H3dd=0"});

  {  // alpha+beta+gamma != 0: the three-segment average cannot vanish
    RegisterSpec reg;
    reg.n_qubits = 2;
    reg.omegas = {0.0, 0.0};
    reg.edges = {Edge{1, 2, 1.0, false}};
    std::vector<ScheduleItem> items;
    // weights (1, 1, 1): pure Heisenberg coupling, trace of weights nonzero
    for (int i = 0; i < 3; ++i)
      items.push_back(SegmentSpec{0.0, 0.0, CouplingWeights{1, 1, 1}, {1.0}, 1e-3});
    const Schedule s(reg, std::move(items));
    const auto segs = toggled_segments(s);
    out.push_back({"wahuha.counterexample", magnus::magnus_terms(segs).order0.max_abs(),
                   0.1, true, "alpha+beta+gamma!=0 survives"});
  }
  return out;
}

std::vector<Check> run_compile_checks() {
  std::vector<Check> out;
  const RegisterSpec reg = two_qubit_register();
  const BlockParams params = BlockParams::from_amplitude(1e-7, 5e5);

  auto equality = [&](const Schedule& toggled) {
    const Schedule physical = compile_to_physical(toggled);
    const double f = fidelity(schedule_propagator(physical), schedule_propagator(toggled));
    return 1.0 - f;
  };
  const Schedule block = basic_block(reg, params);
  const Schedule pair = conjugated_pair(block);
  const Schedule rep = repeat(pair, 3);
  const Schedule echoed = insert_hahn_echo(rep, PauliAxis::x);
  out.push_back({"compile.block", equality(block), 1e-10, false, "basic block"});
  out.push_back({"compile.pair", equality(pair), 1e-10, false, "conjugated pair"});
  out.push_back({"compile.repeat", equality(rep), 1e-10, false, "repeated pairs"});
  out.push_back({"compile.echo", equality(echoed), 1e-10, false, "echo-inserted"});

  {  // equality must also hold segment-by-segment under noise draws
    CouplingNoise noise;
    noise.edges = {CouplingNoise::EdgeDist{reg.edges[0].j_mean, kTwoPi * 9.0}};
    std::mt19937_64 rng_a = member_rng(31, 0);
    std::mt19937_64 rng_b = member_rng(31, 0);
    const UnitaryOperator ua = sim::evolve(echoed, &noise, rng_a);
    const UnitaryOperator ub = sim::evolve(compile_to_physical(echoed), &noise, rng_b);
    out.push_back({"compile.noise", 1.0 - fidelity(ua, ub), 1e-10, false,
                   "per-segment noise, paired draws"});
  }
  {  // accumulated pulse product of the compiled cycle is the identity (up to phase)
    const Schedule physical = compile_to_physical(echoed);
    const UnitaryOperator q = accumulated_pulse(physical);
    const double d = static_cast<double>(q.dim());
    out.push_back({"compile.cyclic", 1.0 - std::abs(q.matrix().trace()) / d, 1e-10, false,
                   "net frame rotation = identity"});
  }
  return out;
}

std::vector<Check> run_checks(const std::string& selector) {
  std::vector<Check> out;
  auto append = [&](std::vector<Check> more) {
    out.insert(out.end(), more.begin(), more.end());
  };
  if (selector == "magnus" || selector == "all") append(run_magnus_checks());
  if (selector == "effective" || selector == "all") append(run_effective_checks());
  if (selector == "wahuha" || selector == "all") append(run_wahuha_checks());
  if (selector == "compile" || selector == "all") append(run_compile_checks());
  if (out.empty())
    throw std::invalid_argument("unknown verify selector '" + selector +
                                "' (magnus|effective|wahuha|compile|all)");
  return out;
}

void print_table(std::ostream& os, const std::vector<Check>& checks) {
  char buf[64];
  auto sci = [&buf](double v, const char* suffix = "") {
    std::snprintf(buf, sizeof buf, "%.3e%s", v, suffix);
    return std::string(buf);
  };
  os << std::left << std::setw(34) << "check" << std::setw(15) << "residual"
     << std::setw(15) << "tolerance" << std::setw(8) << "status"
     << "tag\n";
  for (const Check& c : checks) {
    os << std::left << std::setw(34) << c.name << std::setw(15) << sci(c.value)
       << std::setw(15) << sci(c.threshold, c.greater_is_pass ? " (>)" : "")
       << std::setw(8) << (c.passed() ? "pass" : "FAIL") << c.tag << "\n";
  }
}

bool all_passed(const std::vector<Check>& checks) {
  for (const Check& c : checks)
    if (!c.passed()) return false;
  return true;
}

double residual_coupling_coefficient(const RegisterSpec& reg, const BlockParams& params,
                                     int iterations) {
  const Schedule unit = supercycle(reg, params, iterations);
  const auto segs = toggled_segments(unit);
  const HermitianOperator hbar = magnus::exact_generator(segs);

  // dominant part = single-site content of the generator itself
  HermitianOperator dom = HermitianOperator::zero(reg.n_qubits);
  for (int q = 1; q <= reg.n_qubits; ++q)
    for (PauliAxis ax : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
      const std::array<std::pair<int, PauliAxis>, 1> f{std::pair{q, ax}};
      dom += pauli_coefficient(hbar, f) * embed_pauli(q, ax, reg.n_qubits);
    }
  const HermitianOperator secular = effective::secular_projection(hbar, dom);

  double acc = 0.0;
  int count = 0;
  for (const Edge& e : reg.edges) {
    if (e.j_mean == 0.0) continue;
    double worst = 0.0;
    for (PauliAxis ax : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
      const std::array<std::pair<int, PauliAxis>, 2> f{std::pair{e.a, ax},
                                                       std::pair{e.b, ax}};
      worst = std::max(worst, std::abs(pauli_coefficient(secular, f)));
    }
    acc += worst / std::abs(e.j_mean);
    ++count;
  }
  return count ? acc / count : 0.0;
}

}  // namespace gpdd::verify
