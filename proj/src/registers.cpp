#include "gpdd/registers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace gpdd {

namespace {

constexpr double kMu0Over4Pi = 1e-7;       // T m / A
constexpr double kHbar = 1.054571817e-34;  // J s

void check_edge_sites(int a, int b, int n) {
  if (a < 1 || b < 1 || a > n || b > n)
    throw std::invalid_argument("edge site index out of range");
  if (a == b) throw std::invalid_argument("self-loop edge");
}

}  // namespace

std::vector<std::string> check_register(const RegisterSpec& reg) {
  std::vector<std::string> warnings;
  if (reg.edges.empty()) return warnings;
  double max_j = 0.0;
  for (const Edge& e : reg.edges) max_j = std::max(max_j, std::abs(e.j_mean));
  if (max_j == 0.0) return warnings;

  double min_gap = std::numeric_limits<double>::infinity();
  double min_omega = std::numeric_limits<double>::infinity();
  for (const Edge& e : reg.edges) {
    min_gap = std::min(min_gap, std::abs(reg.omegas[e.a - 1] - reg.omegas[e.b - 1]));
    min_omega = std::min({min_omega, std::abs(reg.omegas[e.a - 1]),
                          std::abs(reg.omegas[e.b - 1])});
  }
  if (min_gap / max_j < 100.0)
    warnings.push_back("min |omega_j - omega_k| / max J = " +
                       std::to_string(min_gap / max_j) +
                       " < 100 over coupled pairs; splitting differences are not >> J");
  if (min_omega / max_j < 100.0)
    warnings.push_back("min |omega_j| / max J = " + std::to_string(min_omega / max_j) +
                       " < 100; Zeeman terms are not >> J");
  return warnings;
}

std::vector<std::pair<int, int>> topology_edges(const Topology& topo,
                                                std::vector<bool>* diagonal_flags) {
  std::vector<std::pair<int, int>> edges;
  std::vector<bool> diag;
  switch (topo.kind) {
    case Topology::Kind::chain: {
      if (topo.length < 1) throw std::invalid_argument("chain length must be >= 1");
      for (int i = 1; i < topo.length; ++i) edges.emplace_back(i, i + 1);
      diag.assign(edges.size(), false);
      break;
    }
    case Topology::Kind::square_lattice: {
      if (topo.rows < 1 || topo.cols < 1)
        throw std::invalid_argument("lattice extent must be >= 1");
      auto site = [&](int r, int c) { return r * topo.cols + c + 1; };
      // row-major adjacency: horizontal bonds, then vertical, then diagonals
      for (int r = 0; r < topo.rows; ++r)
        for (int c = 0; c + 1 < topo.cols; ++c) {
          edges.emplace_back(site(r, c), site(r, c + 1));
          diag.push_back(false);
        }
      for (int r = 0; r + 1 < topo.rows; ++r)
        for (int c = 0; c < topo.cols; ++c) {
          edges.emplace_back(site(r, c), site(r + 1, c));
          diag.push_back(false);
        }
      if (topo.diagonals) {
        for (int r = 0; r + 1 < topo.rows; ++r)
          for (int c = 0; c + 1 < topo.cols; ++c) {
            edges.emplace_back(site(r, c), site(r + 1, c + 1));
            diag.push_back(true);
            edges.emplace_back(site(r, c + 1), site(r + 1, c));
            diag.push_back(true);
          }
      }
      break;
    }
    case Topology::Kind::explicit_edges: {
      edges = topo.edges;
      diag.assign(edges.size(), false);
      break;
    }
  }
  if (diagonal_flags) *diagonal_flags = diag;
  return edges;
}

RegisterSpec build_register(const Topology& topo, const std::vector<double>& omegas,
                            const std::vector<double>& j_means) {
  std::vector<bool> diag;
  const auto pairs = topology_edges(topo, &diag);
  if (j_means.size() != pairs.size())
    throw std::invalid_argument("expected " + std::to_string(pairs.size()) +
                                " coupling values, got " + std::to_string(j_means.size()));

  RegisterSpec reg;
  reg.n_qubits = static_cast<int>(omegas.size());
  reg.omegas = omegas;
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [a, b] = pairs[k];
    if (a > b) std::swap(a, b);
    check_edge_sites(a, b, reg.n_qubits);
    if (!seen.insert({a, b}).second)
      throw std::invalid_argument("duplicate edge in topology");
    reg.edges.push_back(Edge{a, b, j_means[k], diag[k]});
  }
  return reg;
}

double dipolar_coupling(const Geometry& geom, int i, int j) {
  const int n = static_cast<int>(geom.positions.size());
  if (i < 1 || j < 1 || i > n || j > n) throw std::invalid_argument("site index out of range");
  if (i == j) throw std::invalid_argument("dipolar coupling needs two distinct sites");
  const Eigen::Vector3d r = geom.positions[j - 1] - geom.positions[i - 1];
  const double dist = r.norm();
  if (dist <= 0.0) throw std::invalid_argument("coincident spin positions");
  const double cos_t = r.dot(geom.field_direction.normalized()) / dist;
  const double gamma = geom.gyromagnetic_ratio;
  // one factor of hbar converts the energy to an angular frequency
  return kMu0Over4Pi * gamma * gamma * kHbar * (1.0 - 3.0 * cos_t * cos_t) /
         (dist * dist * dist);
}

std::vector<double> zeeman_from_gradient(const Geometry& geom) {
  if (geom.positions.empty()) throw std::invalid_argument("empty geometry");
  const Eigen::Vector3d dir = geom.field_direction.normalized();
  std::vector<double> omegas;
  omegas.reserve(geom.positions.size());
  for (const auto& p : geom.positions)
    omegas.push_back(geom.gyromagnetic_ratio * geom.field_gradient * p.dot(dir));
  return omegas;
}

std::vector<double> sample_couplings(const CouplingNoise& noise, std::mt19937_64& rng) {
  std::vector<double> draws;
  draws.reserve(noise.edges.size());
  for (const auto& e : noise.edges) {
    if (e.stddev < 0.0) throw std::invalid_argument("negative noise std-dev");
    if (e.stddev == 0.0) {
      draws.push_back(e.mean);
    } else {
      std::normal_distribution<double> dist(e.mean, e.stddev);
      draws.push_back(dist(rng));
    }
  }
  return draws;
}

std::mt19937_64 member_rng(std::uint64_t seed, std::uint64_t member) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(member & 0xffffffffu),
                    static_cast<std::uint32_t>(member >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace gpdd
