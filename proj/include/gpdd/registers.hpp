#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Register specification: Zeeman frequencies, coupling graph, geometry-derived
// dipolar couplings, and the per-segment coupling-fluctuation model.
namespace gpdd {

struct Edge {
  int a = 0;            // 1-based site indices, a < b
  int b = 0;
  double j_mean = 0.0;  // rad/s
  bool diagonal = false;  // lattice classification, used by noise presets
};

struct RegisterSpec {
  int n_qubits = 0;
  std::vector<double> omegas;  // rad/s, one per qubit
  std::vector<Edge> edges;
};

/// Validity warnings: fires when min |omega_j - omega_k| / max J over coupled
/// pairs falls below 100 (or omega magnitudes themselves are not >> J).
std::vector<std::string> check_register(const RegisterSpec& reg);

struct Topology {
  enum class Kind { chain, square_lattice, explicit_edges };
  Kind kind = Kind::chain;
  int length = 0;                 // chain
  int rows = 0, cols = 0;         // square lattice
  bool diagonals = false;         // lattice plaquette diagonals
  std::vector<std::pair<int, int>> edges;  // explicit
};

std::vector<std::pair<int, int>> topology_edges(const Topology& topo, std::vector<bool>* diagonal_flags = nullptr);

/// Assemble a RegisterSpec; `omegas` and `j_means` in rad/s, one J per edge in
/// the topology's canonical order (adjacency first, then diagonals).
RegisterSpec build_register(const Topology& topo, const std::vector<double>& omegas,
                            const std::vector<double>& j_means);

struct Geometry {
  std::vector<Eigen::Vector3d> positions;  // m
  Eigen::Vector3d field_direction = Eigen::Vector3d::UnitZ();  // unit vector
  double gyromagnetic_ratio = 0.0;  // rad/(s T)
  double field_gradient = 0.0;      // T/m along field_direction
  double base_field = 0.0;          // T
};

/// Secular dipolar coupling J_ij = (mu0/4pi) gamma^2 hbar (1 - 3 cos^2 th) / r^3,
/// returned as an angular frequency (rad/s). Symmetric in (i, j); i, j 1-based.
double dipolar_coupling(const Geometry& geom, int i, int j);

/// Zeeman splittings from the gradient field, rotating-frame convention: the
/// common gamma*B0 offset is subtracted, so only gradient-induced differences
/// remain. Returned in rad/s.
std::vector<double> zeeman_from_gradient(const Geometry& geom);

struct CouplingNoise {
  struct EdgeDist {
    double mean = 0.0;    // rad/s
    double stddev = 0.0;  // rad/s
  };
  std::vector<EdgeDist> edges;
  std::uint64_t seed = 0;
};

/// One independent normal draw per edge; negative draws are kept (the method
/// is sign-agnostic and truncation would bias the mean).
std::vector<double> sample_couplings(const CouplingNoise& noise, std::mt19937_64& rng);

/// Generator for ensemble member `member`, derived from (seed, member) so
/// parallel members are reproducible regardless of scheduling.
std::mt19937_64 member_rng(std::uint64_t seed, std::uint64_t member);

}  // namespace gpdd
