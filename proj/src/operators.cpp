#include "gpdd/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace gpdd {

namespace {

int qubits_from_dim(Eigen::Index dim) {
  if (dim < 2) throw std::invalid_argument("operator dimension must be >= 2");
  int n = 0;
  Eigen::Index d = dim;
  while (d > 1) {
    if (d % 2 != 0) throw std::invalid_argument("operator dimension must be a power of 2");
    d /= 2;
    ++n;
  }
  if (n > kMaxQubits)
    throw std::invalid_argument("register size " + std::to_string(n) + " exceeds the " +
                                std::to_string(kMaxQubits) + "-qubit dense-simulation guard");
  return n;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

const char* axis_name(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::x: return "x";
    case PauliAxis::y: return "y";
    case PauliAxis::z: return "z";
  }
  return "?";
}

PauliAxis axis_from_name(const std::string& name) {
  if (name == "x") return PauliAxis::x;
  if (name == "y") return PauliAxis::y;
  if (name == "z") return PauliAxis::z;
  throw std::invalid_argument("unknown Pauli axis '" + name + "'");
}

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw std::invalid_argument("Hermitian operator must be square");
  n_qubits_ = qubits_from_dim(entries_.rows());
  const double scale = entries_.cwiseAbs().maxCoeff();
  const double dev = (entries_ - entries_.adjoint().eval()).cwiseAbs().maxCoeff();
  if (dev > kHermTol * std::max(scale, 1e-300) && dev > 0.0)
    throw std::domain_error("matrix is not Hermitian within tolerance (relative deviation " +
                            std::to_string(scale > 0 ? dev / scale : dev) + ")");
}

HermitianOperator HermitianOperator::zero(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("qubit count out of range");
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  return HermitianOperator(Matrix::Zero(d, d));
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other) {
  if (other.dim() != dim()) throw std::invalid_argument("dimension mismatch");
  entries_ += other.entries_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& other) {
  if (other.dim() != dim()) throw std::invalid_argument("dimension mismatch");
  entries_ -= other.entries_;
  return *this;
}

HermitianOperator operator*(double s, const HermitianOperator& h) {
  return HermitianOperator(s * h.entries_);
}

UnitaryOperator::UnitaryOperator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw std::invalid_argument("unitary operator must be square");
  qubits_from_dim(entries_.rows());
  const Matrix gram = entries_.adjoint() * entries_;
  const double dev =
      (gram - Matrix::Identity(entries_.rows(), entries_.cols())).cwiseAbs().maxCoeff();
  if (dev > kUnitaryTol)
    throw std::domain_error("matrix is not unitary within tolerance (deviation " +
                            std::to_string(dev) + ")");
}

UnitaryOperator UnitaryOperator::identity(int dim) {
  return UnitaryOperator(Matrix::Identity(dim, dim));
}

UnitaryOperator UnitaryOperator::adjoint() const {
  return UnitaryOperator(entries_.adjoint());
}

UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  return UnitaryOperator(a.entries_ * b.entries_);
}

Matrix pauli_half(PauliAxis axis) {
  Matrix m(2, 2);
  switch (axis) {
    case PauliAxis::x:
      m << 0.0, 0.5, 0.5, 0.0;
      break;
    case PauliAxis::y:
      m << 0.0, Complex(0, -0.5), Complex(0, 0.5), 0.0;
      break;
    case PauliAxis::z:
      m << 0.5, 0.0, 0.0, -0.5;
      break;
  }
  return m;
}

HermitianOperator embed_pauli(int site, PauliAxis axis, int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("qubit count " + std::to_string(n_qubits) +
                                " outside [1, " + std::to_string(kMaxQubits) + "]");
  if (site < 1 || site > n_qubits)
    throw std::invalid_argument("site " + std::to_string(site) + " outside [1, " +
                                std::to_string(n_qubits) + "]");
  Matrix out = Matrix::Identity(1, 1);
  const Matrix op = pauli_half(axis);
  const Matrix id2 = Matrix::Identity(2, 2);
  for (int s = 1; s <= n_qubits; ++s) out = kron(out, s == site ? op : id2);
  return HermitianOperator(std::move(out));
}

HermitianOperator embed_pauli_product(std::span<const std::pair<int, PauliAxis>> factors,
                                      int n_qubits) {
  if (factors.empty()) throw std::invalid_argument("empty operator product");
  std::unordered_set<int> seen;
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  Matrix out = Matrix::Identity(d, d);
  for (const auto& [site, axis] : factors) {
    if (!seen.insert(site).second)
      throw std::invalid_argument("repeated site in operator product");
    out = out * embed_pauli(site, axis, n_qubits).matrix();
  }
  return HermitianOperator(std::move(out));
}

UnitaryOperator global_rotation(PauliAxis axis, double angle, int n_qubits) {
  if (!std::isfinite(angle)) throw std::invalid_argument("rotation angle must be finite");
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("qubit count out of range");
  // u = cos(a/2) I - i sin(a/2) sigma_axis
  const Matrix u =
      std::cos(angle / 2) * Matrix::Identity(2, 2) -
      Complex(0, 2.0 * std::sin(angle / 2)) * pauli_half(axis);
  Matrix out = Matrix::Identity(1, 1);
  for (int s = 0; s < n_qubits; ++s) out = kron(out, u);
  return UnitaryOperator(std::move(out));
}

Matrix propagator_matrix(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd& w = es.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k)
    phases(k) = std::exp(Complex(0, -w(k) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

UnitaryOperator propagator(const HermitianOperator& h, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("evolution time must be finite and >= 0");
  return UnitaryOperator(propagator_matrix(h.matrix(), t));
}

HermitianOperator conjugate(const HermitianOperator& h, const UnitaryOperator& u) {
  if (h.dim() != u.dim()) throw std::invalid_argument("dimension mismatch");
  return HermitianOperator(u.matrix().adjoint() * h.matrix() * u.matrix());
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("dimension mismatch");
  return a * b - b * a;
}

double fidelity(const UnitaryOperator& u1, const UnitaryOperator& u2) {
  if (u1.dim() != u2.dim()) throw std::invalid_argument("dimension mismatch");
  const Complex tr = (u1.matrix() * u2.matrix().adjoint()).trace();
  const double d = static_cast<double>(u1.dim());
  return std::min(1.0, std::norm(tr) / (d * d));
}

double state_fidelity(const UnitaryOperator& u, const Vector& psi) {
  if (psi.size() != u.dim()) throw std::invalid_argument("dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("state is not normalized");
  const Complex amp = psi.adjoint() * (u.matrix() * psi);
  return std::min(1.0, std::norm(amp));
}

double pauli_coefficient(const HermitianOperator& h,
                         std::span<const std::pair<int, PauliAxis>> factors) {
  const HermitianOperator p = embed_pauli_product(factors, h.n_qubits());
  const double norm =
      std::pow(2.0, h.n_qubits()) / std::pow(4.0, static_cast<double>(factors.size()));
  return ((p.matrix() * h.matrix()).trace() / norm).real();
}

}  // namespace gpdd
