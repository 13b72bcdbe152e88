#include "gpdd/magnus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gpdd::magnus {

namespace {

void check_segments(std::span<const Segment> segments) {
  if (segments.empty()) throw std::invalid_argument("empty schedule");
  const int dim = segments.front().hamiltonian.dim();
  for (const Segment& s : segments) {
    if (s.hamiltonian.dim() != dim)
      throw std::invalid_argument("segment dimension mismatch");
    if (!(s.duration > 0.0) || !std::isfinite(s.duration))
      throw std::invalid_argument("segment duration must be positive and finite");
  }
}

}  // namespace

MagnusResult magnus_terms(std::span<const Segment> segments) {
  check_segments(segments);
  const int dim = segments.front().hamiltonian.dim();
  const std::size_t m = segments.size();

  double total = 0.0;
  std::vector<Matrix> b(m);  // B_i = H_i t_i
  for (std::size_t i = 0; i < m; ++i) {
    b[i] = segments[i].hamiltonian.matrix() * segments[i].duration;
    total += segments[i].duration;
  }

  Matrix h0 = Matrix::Zero(dim, dim);
  for (const Matrix& bi : b) h0 += bi;
  h0 /= total;

  Matrix acc1 = Matrix::Zero(dim, dim);
  for (std::size_t j = 1; j < m; ++j)
    for (std::size_t i = 0; i < j; ++i) acc1 += commutator(b[j], b[i]);
  const Matrix h1 = Complex(0, -1.0 / (2.0 * total)) * acc1;

  // third Magnus exponent for ordered piecewise-constant segments:
  //   Omega3 = (1/6) sum_{a>b>c} ([B_a,[B_b,B_c]] + [B_c,[B_b,B_a]])
  //          + (1/12) sum_{a>c} ([B_a,[B_a,B_c]] + [B_c,[B_c,B_a]])
  // with B_i = -i H_i t_i; order2 = (i/t) Omega3 expressed in the H-language.
  Matrix acc2 = Matrix::Zero(dim, dim);
  for (std::size_t a = 2; a < m; ++a)
    for (std::size_t bb = 1; bb < a; ++bb)
      for (std::size_t c = 0; c < bb; ++c)
        acc2 += (commutator(b[a], commutator(b[bb], b[c])) +
                 commutator(b[c], commutator(b[bb], b[a]))) / 6.0;
  for (std::size_t a = 1; a < m; ++a)
    for (std::size_t c = 0; c < a; ++c)
      acc2 += (commutator(b[a], commutator(b[a], b[c])) +
               commutator(b[c], commutator(b[c], b[a]))) / 12.0;
  const Matrix h2 = -acc2 / total;

  return MagnusResult{HermitianOperator(h0), HermitianOperator(h1), HermitianOperator(h2),
                      total};
}

HermitianOperator exact_generator(std::span<const Segment> segments) {
  check_segments(segments);
  const int dim = segments.front().hamiltonian.dim();

  Matrix u = Matrix::Identity(dim, dim);
  double total = 0.0;
  for (const Segment& s : segments) {
    u = propagator_matrix(s.hamiltonian.matrix(), s.duration) * u;
    total += s.duration;
  }

  // u is unitary (normal), so its Schur form is diagonal up to roundoff and
  // the Schur basis is orthonormal; take the principal log on the diagonal.
  Eigen::ComplexSchur<Matrix> schur(u);
  if (schur.info() != Eigen::Success) throw std::runtime_error("Schur decomposition failed");
  const Matrix& t = schur.matrixT();
  const Matrix& q = schur.matrixU();

  Eigen::VectorXd phases(dim);
  for (int k = 0; k < dim; ++k) phases(k) = std::arg(t(k, k));
  const double max_phase = phases.cwiseAbs().maxCoeff();
  if (max_phase >= std::numbers::pi - 0.1)
    throw std::domain_error(
        "principal-log branch guard: cycle eigenphase magnitude " +
        std::to_string(max_phase) + " reaches pi - 0.1; shorten the schedule");

  // Hbar = (i/t) log u = Q diag(-phase/t) Q^dag
  const Matrix hbar = q * (-phases / total).asDiagonal() * q.adjoint();
  return HermitianOperator(hbar);
}

}  // namespace gpdd::magnus
