#pragma once

#include <span>
#include <vector>

#include "gpdd/operators.hpp"

// Average-Hamiltonian (Magnus) terms for piecewise-constant schedules, and the
// exact effective generator via the principal matrix logarithm. Segment 1 is
// applied first: the cycle propagator is e^{-i H_m t_m} ... e^{-i H_1 t_1}.
namespace gpdd::magnus {

struct Segment {
  HermitianOperator hamiltonian;
  double duration;  // s, strictly positive
};

struct MagnusResult {
  HermitianOperator order0;
  HermitianOperator order1;
  HermitianOperator order2;
  double total_time;

  HermitianOperator sum() const { return order0 + order1 + order2; }
};

/// Orders 0..2 of the average Hamiltonian:
///   order0 = (1/t) sum_i H_i t_i
///   order1 = -(i/2t) sum_{j>i} [H_j t_j, H_i t_i]
///   order2 = the piecewise-constant specialization of the Magnus third
///            exponent (nested double commutators); validated against
///            exact_generator, which is authoritative for sign conventions.
MagnusResult magnus_terms(std::span<const Segment> segments);

/// (i/t) log of the cycle propagator, principal branch. Throws if any
/// eigenphase magnitude reaches pi - 0.1 (branch-ambiguity guard).
HermitianOperator exact_generator(std::span<const Segment> segments);

}  // namespace gpdd::magnus
