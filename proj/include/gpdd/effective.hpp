#pragma once

#include <array>
#include <string>
#include <vector>

#include "gpdd/operators.hpp"
#include "gpdd/registers.hpp"

#include "json.hpp"

// Closed-form effective Hamiltonians of the global-pulse decoupling scheme and
// the secular (rotating-wave) projection. Coefficients are validated against
// the magnus oracles; see the tests for the cubic-residual checks.
namespace gpdd::effective {

struct PauliProduct {
  std::vector<std::pair<int, PauliAxis>> factors;  // weight <= 2, 1-based sites
  std::string name() const;                        // e.g. "I1y*I2z"
};

struct EffectiveTerm {
  double coefficient = 0.0;  // rad/s
  PauliProduct op;
};

struct EffectiveForm {
  std::vector<EffectiveTerm> terms;
  int truncation_order = 2;
  double theta = 0.0;
  std::vector<std::string> warnings;

  HermitianOperator to_operator(int n_qubits) const;
  /// Coefficient of a named product (0 when absent).
  double coefficient(const PauliProduct& op) const;
};

nlohmann::json effective_form_to_json(const EffectiveForm& form);

/// Average Hamiltonian of the four-period block over 4*delta_t:
///   J zz - (theta/2)(w1 I1y + w2 I2y) + theta J (yz + zy)
///   + (theta^2/2)(w1 I1z + w2 I2z) + (4/3) theta^2 J (yy - zz).
EffectiveForm h1eff_analytic(const RegisterSpec& reg, double theta, double j);

/// After the pi-y conjugated pair (8 delta_t): the sign-odd terms drop,
///   -(theta/2)(w y) + J zz + (4/3) theta^2 J (yy - zz).
EffectiveForm h2eff_analytic(const RegisterSpec& reg, double theta, double j);

/// Rotating-wave reduction of h2eff: -(theta/2)(w y) + (4/3) theta^2 J yy.
/// Warns when theta |w1 - w2| / J < 10.
EffectiveForm h3eff_analytic(const RegisterSpec& reg, double theta, double j);

/// N-qubit generalization: -(theta/2) sum_j w_j I_jy
/// + (4/3) theta^2 sum_edges J_jk I_jy I_ky. Warns per edge on RWA validity.
EffectiveForm heff_n_analytic(const RegisterSpec& reg, double theta);

/// Block average with independent couplings J1..J4 in the four periods:
///   zz (J1+J2+J3+J4)/4, y-Zeeman -(theta/2) w,
///   (yz+zy) theta (J1+3J2+3J3+J4)/8, z-Zeeman (theta^2/2) w,
///   (yy-zz) theta^2 (J1+7J2+7J3+J4)/12.
EffectiveForm h1eff_fluct_analytic(const RegisterSpec& reg, double theta,
                                   const std::array<double, 4>& j);

/// Pair average with couplings J1..J4 (first block) and J5..J8 (second):
///   zz (sum J)/8, y-Zeeman -(theta/2) w,
///   (yz+zy) theta (J1+3J2+3J3+J4-J5-3J6-3J7-J8)/16,
///   (yy-zz) theta^2 (J1+7J2+7J3+J4+J5+7J6+7J7+J8)/24.
EffectiveForm h2eff_fluct_analytic(const RegisterSpec& reg, double theta,
                                   const std::array<double, 8>& j);

/// Zero every matrix element of h_full connecting eigenvalue groups of
/// h_dominant whose gap exceeds group_tol * (spectral range); equivalently the
/// interaction-frame time average. Idempotent and Frobenius-norm nonincreasing.
HermitianOperator secular_projection(const HermitianOperator& h_full,
                                     const HermitianOperator& h_dominant,
                                     double group_tol = 1e-6);

}  // namespace gpdd::effective
