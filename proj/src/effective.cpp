#include "gpdd/effective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gpdd::effective {

namespace {

PauliProduct single(int site, PauliAxis a) { return PauliProduct{{{site, a}}}; }
PauliProduct two(int s1, PauliAxis a1, int s2, PauliAxis a2) {
  return PauliProduct{{{s1, a1}, {s2, a2}}};
}

void require_two_qubits(const RegisterSpec& reg) {
  if (reg.n_qubits != 2)
    throw std::invalid_argument("this closed form is defined for a 2-qubit register");
}

void push(EffectiveForm& f, double c, PauliProduct op) {
  if (c == 0.0) return;
  for (EffectiveTerm& t : f.terms)
    if (t.op.factors == op.factors) {
      t.coefficient += c;
      return;
    }
  f.terms.push_back(EffectiveTerm{c, std::move(op)});
}

void rwa_warning(EffectiveForm& f, double theta, double gap, double j,
                 const std::string& label) {
  if (j == 0.0) return;
  const double ratio = theta * gap / std::abs(j);
  if (ratio < 10.0)
    f.warnings.push_back(label + ": theta |w_j - w_k| / J = " + std::to_string(ratio) +
                         " < 10; rotating-wave reduction is not well separated");
}

}  // namespace

std::string PauliProduct::name() const {
  std::string out;
  for (const auto& [site, axis] : factors) {
    if (!out.empty()) out += "*";
    out += "I" + std::to_string(site) + axis_name(axis);
  }
  return out;
}

HermitianOperator EffectiveForm::to_operator(int n_qubits) const {
  HermitianOperator acc = HermitianOperator::zero(n_qubits);
  for (const EffectiveTerm& t : terms)
    acc += t.coefficient * embed_pauli_product(t.op.factors, n_qubits);
  return acc;
}

double EffectiveForm::coefficient(const PauliProduct& op) const {
  double c = 0.0;
  for (const EffectiveTerm& t : terms)
    if (t.op.factors == op.factors) c += t.coefficient;
  return c;
}

nlohmann::json effective_form_to_json(const EffectiveForm& form) {
  nlohmann::json terms = nlohmann::json::array();
  for (const EffectiveTerm& t : form.terms)
    terms.push_back({{"operator", t.op.name()}, {"coefficient_rad_s", t.coefficient}});
  return nlohmann::json{{"terms", terms},
                        {"truncation_order", form.truncation_order},
                        {"theta", form.theta},
                        {"warnings", form.warnings}};
}

EffectiveForm h1eff_analytic(const RegisterSpec& reg, double theta, double j) {
  require_two_qubits(reg);
  const double w1 = reg.omegas[0], w2 = reg.omegas[1];
  EffectiveForm f;
  f.theta = theta;
  push(f, j, two(1, PauliAxis::z, 2, PauliAxis::z));
  push(f, -theta / 2 * w1, single(1, PauliAxis::y));
  push(f, -theta / 2 * w2, single(2, PauliAxis::y));
  push(f, theta * j, two(1, PauliAxis::y, 2, PauliAxis::z));
  push(f, theta * j, two(1, PauliAxis::z, 2, PauliAxis::y));
  push(f, theta * theta / 2 * w1, single(1, PauliAxis::z));
  push(f, theta * theta / 2 * w2, single(2, PauliAxis::z));
  const double cyy = 4.0 / 3.0 * theta * theta * j;
  push(f, cyy, two(1, PauliAxis::y, 2, PauliAxis::y));
  push(f, -cyy, two(1, PauliAxis::z, 2, PauliAxis::z));
  return f;
}

EffectiveForm h2eff_analytic(const RegisterSpec& reg, double theta, double j) {
  require_two_qubits(reg);
  const double w1 = reg.omegas[0], w2 = reg.omegas[1];
  EffectiveForm f;
  f.theta = theta;
  push(f, -theta / 2 * w1, single(1, PauliAxis::y));
  push(f, -theta / 2 * w2, single(2, PauliAxis::y));
  push(f, j, two(1, PauliAxis::z, 2, PauliAxis::z));
  const double cyy = 4.0 / 3.0 * theta * theta * j;
  push(f, cyy, two(1, PauliAxis::y, 2, PauliAxis::y));
  push(f, -cyy, two(1, PauliAxis::z, 2, PauliAxis::z));
  return f;
}

EffectiveForm h3eff_analytic(const RegisterSpec& reg, double theta, double j) {
  require_two_qubits(reg);
  const double w1 = reg.omegas[0], w2 = reg.omegas[1];
  EffectiveForm f;
  f.theta = theta;
  push(f, -theta / 2 * w1, single(1, PauliAxis::y));
  push(f, -theta / 2 * w2, single(2, PauliAxis::y));
  push(f, 4.0 / 3.0 * theta * theta * j, two(1, PauliAxis::y, 2, PauliAxis::y));
  rwa_warning(f, theta, std::abs(w1 - w2), j, "h3eff");
  return f;
}

EffectiveForm heff_n_analytic(const RegisterSpec& reg, double theta) {
  EffectiveForm f;
  f.theta = theta;
  for (int q = 1; q <= reg.n_qubits; ++q)
    push(f, -theta / 2 * reg.omegas[q - 1], single(q, PauliAxis::y));
  for (const Edge& e : reg.edges) {
    push(f, 4.0 / 3.0 * theta * theta * e.j_mean,
         two(e.a, PauliAxis::y, e.b, PauliAxis::y));
    rwa_warning(f, theta, std::abs(reg.omegas[e.a - 1] - reg.omegas[e.b - 1]), e.j_mean,
                "edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ")");
  }
  return f;
}

EffectiveForm h1eff_fluct_analytic(const RegisterSpec& reg, double theta,
                                   const std::array<double, 4>& j) {
  require_two_qubits(reg);
  const double w1 = reg.omegas[0], w2 = reg.omegas[1];
  const double jsum = std::accumulate(j.begin(), j.end(), 0.0);
  EffectiveForm f;
  f.theta = theta;
  push(f, jsum / 4, two(1, PauliAxis::z, 2, PauliAxis::z));
  push(f, -theta / 2 * w1, single(1, PauliAxis::y));
  push(f, -theta / 2 * w2, single(2, PauliAxis::y));
  const double cyz = theta * (j[0] + 3 * j[1] + 3 * j[2] + j[3]) / 8;
  push(f, cyz, two(1, PauliAxis::y, 2, PauliAxis::z));
  push(f, cyz, two(1, PauliAxis::z, 2, PauliAxis::y));
  push(f, theta * theta / 2 * w1, single(1, PauliAxis::z));
  push(f, theta * theta / 2 * w2, single(2, PauliAxis::z));
  const double cyy = theta * theta * (j[0] + 7 * j[1] + 7 * j[2] + j[3]) / 12;
  push(f, cyy, two(1, PauliAxis::y, 2, PauliAxis::y));
  push(f, -cyy, two(1, PauliAxis::z, 2, PauliAxis::z));
  return f;
}

EffectiveForm h2eff_fluct_analytic(const RegisterSpec& reg, double theta,
                                   const std::array<double, 8>& j) {
  require_two_qubits(reg);
  const double w1 = reg.omegas[0], w2 = reg.omegas[1];
  const double jsum = std::accumulate(j.begin(), j.end(), 0.0);
  EffectiveForm f;
  f.theta = theta;
  push(f, jsum / 8, two(1, PauliAxis::z, 2, PauliAxis::z));
  push(f, -theta / 2 * w1, single(1, PauliAxis::y));
  push(f, -theta / 2 * w2, single(2, PauliAxis::y));
  const double cyz = theta *
                     (j[0] + 3 * j[1] + 3 * j[2] + j[3] - j[4] - 3 * j[5] - 3 * j[6] - j[7]) /
                     16;
  push(f, cyz, two(1, PauliAxis::y, 2, PauliAxis::z));
  push(f, cyz, two(1, PauliAxis::z, 2, PauliAxis::y));
  const double cyy =
      theta * theta *
      (j[0] + 7 * j[1] + 7 * j[2] + j[3] + j[4] + 7 * j[5] + 7 * j[6] + j[7]) / 24;
  push(f, cyy, two(1, PauliAxis::y, 2, PauliAxis::y));
  push(f, -cyy, two(1, PauliAxis::z, 2, PauliAxis::z));
  return f;
}

HermitianOperator secular_projection(const HermitianOperator& h_full,
                                     const HermitianOperator& h_dominant,
                                     double group_tol) {
  if (h_full.dim() != h_dominant.dim()) throw std::invalid_argument("dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h_dominant.matrix());
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd& w = es.eigenvalues();
  const Matrix& v = es.eigenvectors();

  const double range = w.maxCoeff() - w.minCoeff();
  const double tol = group_tol * std::max(range, 1e-300);

  Matrix in_basis = v.adjoint() * h_full.matrix() * v;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    for (Eigen::Index k = 0; k < w.size(); ++k)
      if (std::abs(w(i) - w(k)) > tol) in_basis(i, k) = Complex(0, 0);
  return HermitianOperator(v * in_basis * v.adjoint());
}

}  // namespace gpdd::effective
