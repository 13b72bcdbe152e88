#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

// Dense operator algebra for spin-1/2 registers. All Hamiltonian entries are
// angular frequencies (rad/s); spin operators use the I = sigma/2 convention.
namespace gpdd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class PauliAxis { x, y, z };

const char* axis_name(PauliAxis axis);
PauliAxis axis_from_name(const std::string& name);

// exact dense simulation only; 2^12 = 4096 is the largest supported space
inline constexpr int kMaxQubits = 12;
inline constexpr double kHermTol = 1e-12;   // relative to max |entry|
inline constexpr double kUnitaryTol = 1e-10; // max-norm of U^dag U - I

/// Hermitian operator on a 2^N-dimensional register space, validated on
/// construction (self-adjoint within kHermTol, power-of-two dimension).
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);
  static HermitianOperator zero(int n_qubits);

  const Matrix& matrix() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  int n_qubits() const { return n_qubits_; }

  double max_abs() const { return entries_.cwiseAbs().maxCoeff(); }
  double frobenius_norm() const { return entries_.norm(); }

  HermitianOperator& operator+=(const HermitianOperator& other);
  HermitianOperator& operator-=(const HermitianOperator& other);
  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) {
    a += b;
    return a;
  }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) {
    a -= b;
    return a;
  }
  friend HermitianOperator operator*(double s, const HermitianOperator& h);

 private:
  Matrix entries_;
  int n_qubits_;
};

/// Unitary propagator, validated on construction (U^dag U = I within kUnitaryTol).
class UnitaryOperator {
 public:
  explicit UnitaryOperator(Matrix entries);
  static UnitaryOperator identity(int dim);

  const Matrix& matrix() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.rows()); }

  UnitaryOperator adjoint() const;
  friend UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b);

 private:
  Matrix entries_;
};

// single-site spin matrix I_axis = sigma_axis / 2
Matrix pauli_half(PauliAxis axis);

/// I_{site,axis}: identity on every qubit except `site` (1-based), I_axis there.
HermitianOperator embed_pauli(int site, PauliAxis axis, int n_qubits);

/// Product of embedded single-site spin operators at distinct sites.
HermitianOperator embed_pauli_product(
    std::span<const std::pair<int, PauliAxis>> factors, int n_qubits);

/// exp(-i angle sum_j I_{j,axis}) = u (x) u (x) ... (x) u with u = exp(-i angle I_axis).
UnitaryOperator global_rotation(PauliAxis axis, double angle, int n_qubits);

/// exp(-i H t) via eigendecomposition of the Hermitian generator.
UnitaryOperator propagator(const HermitianOperator& h, double t);

// exp(-i M t) for a raw Hermitian matrix; hot-path variant without wrapper checks
Matrix propagator_matrix(const Matrix& h, double t);

/// U^dag H U (toggling-frame transformation).
HermitianOperator conjugate(const HermitianOperator& h, const UnitaryOperator& u);

/// AB - BA (anti-Hermitian for Hermitian inputs).
Matrix commutator(const Matrix& a, const Matrix& b);

/// |tr(U1 U2^dag)|^2 / d^2; 1 iff U1 = e^{i a} U2.
double fidelity(const UnitaryOperator& u1, const UnitaryOperator& u2);

/// |<psi| U |psi>|^2 for a normalized state.
double state_fidelity(const UnitaryOperator& u, const Vector& psi);

/// Coefficient of the given spin-operator product in H, using the
/// orthogonality tr(P_a P_b) = 2^N / 4^w for weight-w products.
double pauli_coefficient(const HermitianOperator& h,
                         std::span<const std::pair<int, PauliAxis>> factors);

}  // namespace gpdd
