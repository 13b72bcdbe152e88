#include "doctest.h"

#include <array>
#include <numbers>
#include <random>

#include "gpdd/operators.hpp"

using namespace gpdd;

namespace {

constexpr double kPi = std::numbers::pi;

HermitianOperator random_hermitian(std::mt19937_64& rng, int dim, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) m(i, k) = Complex(g(rng), g(rng));
  return HermitianOperator(Matrix(scale * 0.5 * (m + m.adjoint())));
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("embed_pauli matches the tensor-product definition") {
  const HermitianOperator z1 = embed_pauli(1, PauliAxis::z, 1);
  CHECK(z1.matrix()(0, 0) == Complex(0.5, 0));
  CHECK(z1.matrix()(1, 1) == Complex(-0.5, 0));

  // I2x on two qubits: entries 1/2 at (1,2),(2,1),(3,4),(4,3) in 1-based indexing
  const HermitianOperator x2 = embed_pauli(2, PauliAxis::x, 2);
  CHECK(x2.matrix()(0, 1) == Complex(0.5, 0));
  CHECK(x2.matrix()(1, 0) == Complex(0.5, 0));
  CHECK(x2.matrix()(2, 3) == Complex(0.5, 0));
  CHECK(x2.matrix()(3, 2) == Complex(0.5, 0));
  CHECK(x2.matrix().cwiseAbs().sum() == doctest::Approx(2.0));

  CHECK(std::abs(x2.matrix().trace()) < 1e-15);
  Eigen::SelfAdjointEigenSolver<Matrix> es(x2.matrix());
  CHECK(es.eigenvalues().minCoeff() == doctest::Approx(-0.5));
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(0.5));
}

TEST_CASE("embedded operators are orthogonal under the trace inner product") {
  // tr(I_{j,a} I_{k,b}) = 2^N/4 delta_jk delta_ab, checked exhaustively for N <= 3
  for (int n = 1; n <= 3; ++n) {
    const double expected = std::pow(2.0, n) / 4.0;
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k)
        for (PauliAxis a : {PauliAxis::x, PauliAxis::y, PauliAxis::z})
          for (PauliAxis b : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
            const Complex tr =
                (embed_pauli(j, a, n).matrix() * embed_pauli(k, b, n).matrix()).trace();
            const double want = (j == k && a == b) ? expected : 0.0;
            CHECK(std::abs(tr - Complex(want, 0)) < 1e-12);
          }
  }
}

TEST_CASE("embed_pauli rejects out-of-range sites and oversized registers") {
  CHECK_THROWS_AS(embed_pauli(0, PauliAxis::x, 2), std::invalid_argument);
  CHECK_THROWS_AS(embed_pauli(3, PauliAxis::x, 2), std::invalid_argument);
  CHECK_THROWS_AS(embed_pauli(1, PauliAxis::x, 13), std::invalid_argument);
}

TEST_CASE("global_rotation basics") {
  const int n = 2;
  CHECK((global_rotation(PauliAxis::x, 0.0, n).matrix() - Matrix::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  // exp(-i pi sigma_x / 2) = -i sigma_x
  const UnitaryOperator u = global_rotation(PauliAxis::x, kPi, 1);
  Matrix expected(2, 2);
  expected << 0, Complex(0, -1), Complex(0, -1), 0;
  CHECK((u.matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);

  // pi rotation about x flips z
  const UnitaryOperator gx = global_rotation(PauliAxis::x, kPi, 3);
  const HermitianOperator z2 = embed_pauli(2, PauliAxis::z, 3);
  const HermitianOperator flipped = conjugate(z2, gx);
  CHECK((flipped.matrix() + z2.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("propagator of a diagonal generator and group law") {
  const double w = 2.5;
  const HermitianOperator h = w * embed_pauli(1, PauliAxis::z, 1);
  const double t = 0.37;
  const UnitaryOperator u = propagator(h, t);
  CHECK(std::abs(u.matrix()(0, 0) - std::exp(Complex(0, -w * t / 2))) < 1e-14);
  CHECK(std::abs(u.matrix()(1, 1) - std::exp(Complex(0, w * t / 2))) < 1e-14);

  std::mt19937_64 rng(11);
  const HermitianOperator hr = random_hermitian(rng, 4);
  const UnitaryOperator a = propagator(hr, 0.2);
  const UnitaryOperator b = propagator(hr, 0.5);
  const UnitaryOperator ab = propagator(hr, 0.7);
  CHECK(((a.matrix() * b.matrix()) - ab.matrix()).cwiseAbs().maxCoeff() < 1e-10);

  CHECK((propagator(hr, 0.0).matrix() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK_THROWS_AS(propagator(hr, -1.0), std::invalid_argument);
}

TEST_CASE("propagator is unitary and matches an independent eigendecomposition oracle") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int dim = 1 << n;
    const HermitianOperator h = random_hermitian(rng, dim);
    const double t = 0.05 + 0.4 * (static_cast<double>(rng() % 1000) / 1000.0);
    const UnitaryOperator u = propagator(h, t);
    CHECK((u.matrix().adjoint() * u.matrix() - Matrix::Identity(dim, dim))
              .cwiseAbs()
              .maxCoeff() < 1e-10);

    // oracle: V diag(exp(-i lambda t)) V^dag built term by term
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    Matrix oracle = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k)
      oracle += std::exp(Complex(0, -es.eigenvalues()(k) * t)) *
                (es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint());
    CHECK((u.matrix() - oracle).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("conjugate preserves the spectrum and inverts cleanly") {
  std::mt19937_64 rng(7);
  const HermitianOperator h = random_hermitian(rng, 8);
  const UnitaryOperator id = UnitaryOperator::identity(8);
  CHECK((conjugate(h, id).matrix() - h.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  const UnitaryOperator u = propagator(random_hermitian(rng, 8), 0.3);
  const HermitianOperator c = conjugate(h, u);
  Eigen::SelfAdjointEigenSolver<Matrix> ea(h.matrix()), eb(c.matrix());
  CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);

  // both z-flips cancel in the bilinear
  using P = std::pair<int, PauliAxis>;
  const HermitianOperator zz =
      embed_pauli_product(std::array{P{1, PauliAxis::z}, P{2, PauliAxis::z}}, 2);
  const UnitaryOperator gx = global_rotation(PauliAxis::x, kPi, 2);
  CHECK((conjugate(zz, gx).matrix() - zz.matrix()).cwiseAbs().maxCoeff() < 1e-12);

  // the Zeeman sum flips sign, which is how the second block segment arises
  const HermitianOperator zsum = 1.5 * embed_pauli(1, PauliAxis::z, 2) +
                                 0.7 * embed_pauli(2, PauliAxis::z, 2);
  CHECK((conjugate(zsum, gx).matrix() + zsum.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("commutator su(2) relations") {
  const Matrix ix = embed_pauli(1, PauliAxis::x, 1).matrix();
  const Matrix iy = embed_pauli(1, PauliAxis::y, 1).matrix();
  const Matrix iz = embed_pauli(1, PauliAxis::z, 1).matrix();
  CHECK((commutator(ix, iy) - Complex(0, 1) * iz).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(commutator(ix, ix).cwiseAbs().maxCoeff() == 0.0);

  const Matrix x1 = embed_pauli(1, PauliAxis::x, 2).matrix();
  const Matrix y2 = embed_pauli(2, PauliAxis::y, 2).matrix();
  CHECK(commutator(x1, y2).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("fidelity: phase invariance, symmetry, unitary invariance") {
  const UnitaryOperator id = UnitaryOperator::identity(2);
  CHECK(fidelity(id, id) == doctest::Approx(1.0));

  const UnitaryOperator phased(Matrix(std::exp(Complex(0, 1.234)) * Matrix::Identity(2, 2)));
  CHECK(fidelity(id, phased) == doctest::Approx(1.0));

  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  CHECK(fidelity(id, UnitaryOperator(sx)) == doctest::Approx(0.0));

  std::mt19937_64 rng(5);
  const UnitaryOperator a = propagator(random_hermitian(rng, 4), 0.4);
  const UnitaryOperator b = propagator(random_hermitian(rng, 4), 0.4);
  const UnitaryOperator w = propagator(random_hermitian(rng, 4), 0.4);
  CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)));
  CHECK(fidelity(w * a, w * b) == doctest::Approx(fidelity(a, b)));
  CHECK(fidelity(a * w, b * w) == doctest::Approx(fidelity(a, b)));
}

TEST_CASE("state_fidelity") {
  Vector zero(2), plus(2);
  zero << 1, 0;
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const UnitaryOperator id = UnitaryOperator::identity(2);
  CHECK(state_fidelity(id, zero) == doctest::Approx(1.0));

  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const UnitaryOperator ux(sx);
  CHECK(state_fidelity(ux, zero) == doctest::Approx(0.0));
  CHECK(state_fidelity(ux, plus) == doctest::Approx(1.0));

  Vector bad(2);
  bad << 1, 1;
  CHECK_THROWS_AS(state_fidelity(id, bad), std::invalid_argument);
}

TEST_CASE("type invariants are enforced") {
  Matrix nonherm(2, 2);
  nonherm << 1, 2, 3, 4;
  CHECK_THROWS_AS(HermitianOperator{nonherm}, std::domain_error);

  Matrix nonunit(2, 2);
  nonunit << 1, 0, 0, 2;
  CHECK_THROWS_AS(UnitaryOperator{nonunit}, std::domain_error);

  Matrix odd = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(UnitaryOperator{odd}, std::invalid_argument);
}

TEST_CASE("pauli_coefficient extracts what was put in") {
  using P = std::pair<int, PauliAxis>;
  HermitianOperator h = HermitianOperator::zero(3);
  h += 1.25 * embed_pauli(2, PauliAxis::y, 3);
  h += -0.5 * embed_pauli_product(std::array{P{1, PauliAxis::y}, P{3, PauliAxis::z}}, 3);
  CHECK(pauli_coefficient(h, std::array{P{2, PauliAxis::y}}) == doctest::Approx(1.25));
  CHECK(pauli_coefficient(h, std::array{P{1, PauliAxis::y}, P{3, PauliAxis::z}}) ==
        doctest::Approx(-0.5));
  CHECK(pauli_coefficient(h, std::array{P{1, PauliAxis::x}}) == doctest::Approx(0.0));
}

}  // TEST_SUITE
