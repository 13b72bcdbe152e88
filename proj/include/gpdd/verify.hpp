#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gpdd/registers.hpp"
#include "gpdd/schedule.hpp"

// Built-in residual checks behind `gpdd verify`: closed-form effective
// Hamiltonians against the magnus oracles, the dipolar decoupling identity,
// and physical-compilation propagator equality.
namespace gpdd::verify {

struct Check {
  std::string name;
  double value = 0.0;      // measured residual / ratio deviation / norm
  double threshold = 0.0;  // documented tolerance
  bool greater_is_pass = false;  // counterexample-style checks pass when value > threshold
  std::string tag;         // stable identifier of the analytic form being checked

  bool passed() const { return greater_is_pass ? value > threshold : value <= threshold; }
};

std::vector<Check> run_magnus_checks();
std::vector<Check> run_effective_checks();
std::vector<Check> run_wahuha_checks();
std::vector<Check> run_compile_checks();

/// selector: magnus | effective | wahuha | compile | all
std::vector<Check> run_checks(const std::string& selector);

void print_table(std::ostream& os, const std::vector<Check>& checks);
bool all_passed(const std::vector<Check>& checks);

/// Residual coupling of the supercycle: mean over coupled edges of the largest
/// same-axis two-site coefficient of the rotating-wave-projected exact
/// generator, normalized by the edge's mean coupling. For one iteration this
/// approaches (4/3) theta^2.
double residual_coupling_coefficient(const RegisterSpec& reg, const BlockParams& params,
                                     int iterations);

}  // namespace gpdd::verify
