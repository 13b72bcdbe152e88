#include "doctest.h"

#include <random>

#include "gpdd/magnus.hpp"

using namespace gpdd;

namespace {

HermitianOperator random_hermitian(std::mt19937_64& rng, int dim, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) m(i, k) = Complex(g(rng), g(rng));
  return HermitianOperator(Matrix(scale * 0.5 * (m + m.adjoint())));
}

}  // namespace

TEST_SUITE("magnus") {

TEST_CASE("single segment reproduces its Hamiltonian") {
  std::mt19937_64 rng(1);
  const HermitianOperator h = random_hermitian(rng, 4);
  const std::vector<magnus::Segment> segs{{h, 0.31}};
  const auto res = magnus::magnus_terms(segs);
  CHECK((res.order0 - h).max_abs() < 1e-13);
  CHECK(res.order1.max_abs() < 1e-14);
  CHECK(res.order2.max_abs() < 1e-14);
  CHECK(res.total_time == doctest::Approx(0.31));

  const HermitianOperator exact = magnus::exact_generator(segs);
  CHECK((exact - h).max_abs() < 1e-10);
}

TEST_CASE("commuting segments: weighted mean, vanishing higher orders") {
  const HermitianOperator a = embed_pauli(1, PauliAxis::z, 2);
  const HermitianOperator b =
      embed_pauli_product(std::array{std::pair{1, PauliAxis::z}, std::pair{2, PauliAxis::z}},
                          2);
  const std::vector<magnus::Segment> segs{{a, 0.2}, {b, 0.6}};
  const auto res = magnus::magnus_terms(segs);
  CHECK(res.order1.max_abs() < 1e-15);
  CHECK(res.order2.max_abs() < 1e-15);

  const HermitianOperator mean = 0.25 * a + 0.75 * b;
  CHECK((res.order0 - mean).max_abs() < 1e-14);
  CHECK((magnus::exact_generator(segs) - mean).max_abs() < 1e-10);
}

TEST_CASE("truncation residual scales cubically in the durations") {
  std::mt19937_64 rng(42);
  std::vector<magnus::Segment> base;
  for (int i = 0; i < 3; ++i) base.push_back({random_hermitian(rng, 4), 0.14 + 0.04 * i});

  auto residual = [&](double s) {
    std::vector<magnus::Segment> segs = base;
    for (auto& seg : segs) seg.duration *= s;
    return (magnus::exact_generator(segs) - magnus::magnus_terms(segs).sum()).max_abs();
  };
  const double r1 = residual(0.2);
  const double r2 = residual(0.1);
  const double r3 = residual(0.05);
  CHECK(r1 / r2 >= 7.0);  // halving durations cuts the residual ~8x
  CHECK(r1 / r2 <= 10.0);
  CHECK(r2 / r3 >= 7.0);
  CHECK(r2 / r3 <= 10.0);
}

TEST_CASE("order scaling: residual after orders<=n falls as s^{n+1}") {
  std::mt19937_64 rng(43);
  std::vector<magnus::Segment> base;
  for (int i = 0; i < 3; ++i) base.push_back({random_hermitian(rng, 4), 0.15 + 0.05 * i});

  auto residual = [&](int order, double s) {
    std::vector<magnus::Segment> segs = base;
    for (auto& seg : segs) seg.duration *= s;
    const auto res = magnus::magnus_terms(segs);
    HermitianOperator acc = res.order0;
    if (order >= 1) acc += res.order1;
    if (order >= 2) acc += res.order2;
    return (magnus::exact_generator(segs) - acc).max_abs();
  };
  for (int order = 0; order <= 2; ++order) {
    const double ratio = residual(order, 0.2) / residual(order, 0.1);
    const double expected = std::pow(2.0, order + 1);
    CHECK(ratio == doctest::Approx(expected).epsilon(0.25));
  }
}

TEST_CASE("time-symmetric concatenation cancels the first order") {
  std::mt19937_64 rng(44);
  std::vector<magnus::Segment> segs;
  for (int i = 0; i < 3; ++i) segs.push_back({random_hermitian(rng, 4), 0.04 + 0.02 * i});
  std::vector<magnus::Segment> sym = segs;
  sym.insert(sym.end(), segs.rbegin(), segs.rend());
  const auto res = magnus::magnus_terms(sym);
  CHECK(res.order1.max_abs() / res.order0.max_abs() < 1e-13);
}

TEST_CASE("conjugation covariance") {
  std::mt19937_64 rng(45);
  const UnitaryOperator u = global_rotation(PauliAxis::y, 1.1, 2);
  std::vector<magnus::Segment> segs, conj_segs;
  for (int i = 0; i < 3; ++i) {
    const HermitianOperator h = random_hermitian(rng, 4);
    segs.push_back({h, 0.05 + 0.02 * i});
    conj_segs.push_back({conjugate(h, u), 0.05 + 0.02 * i});
  }
  const auto direct = magnus::magnus_terms(conj_segs);
  const auto rotated = magnus::magnus_terms(segs);
  CHECK((direct.order0 - conjugate(rotated.order0, u)).max_abs() < 1e-12);
  CHECK((direct.order1 - conjugate(rotated.order1, u)).max_abs() < 1e-12);
  CHECK((direct.order2 - conjugate(rotated.order2, u)).max_abs() < 1e-12);
}

TEST_CASE("empty and mismatched schedules are rejected") {
  CHECK_THROWS_AS(magnus::magnus_terms({}), std::invalid_argument);
  std::mt19937_64 rng(3);
  const std::vector<magnus::Segment> bad{{random_hermitian(rng, 2), 0.1},
                                         {random_hermitian(rng, 4), 0.1}};
  CHECK_THROWS_AS(magnus::magnus_terms(bad), std::invalid_argument);
  const std::vector<magnus::Segment> zero_dur{{random_hermitian(rng, 2), 0.0}};
  CHECK_THROWS_AS(magnus::magnus_terms(zero_dur), std::invalid_argument);
}

TEST_CASE("principal-log branch guard fires near an eigenphase of pi") {
  const HermitianOperator h = 2.0 * embed_pauli(1, PauliAxis::z, 1);  // eigenvalues +-1
  const std::vector<magnus::Segment> ok{{h, 1.0}};                    // phases +-1
  CHECK_NOTHROW(magnus::exact_generator(ok));
  const std::vector<magnus::Segment> bad{{h, 3.1}};  // phases +-3.1, beyond pi - 0.1
  CHECK_THROWS_AS(magnus::exact_generator(bad), std::domain_error);
}

}  // TEST_SUITE
