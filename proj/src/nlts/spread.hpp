#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <utility>
#include <variant>

#include "json.hpp"
#include "nlts/clusters.hpp"
#include "nlts/hamiltonian.hpp"

namespace qtanner::nlts {

// 1/4 - 1/(4 sqrt 2)
inline const double kMuPrime = 0.25 - 0.25 / std::sqrt(2.0);
inline constexpr double kMuSpread = 0.02;

using DensityMatrix = Eigen::MatrixXcd;
using QuantumState = std::variant<StateVector, DensityMatrix>;

std::size_t qubit_count(const QuantumState& s);

// Exact Z- and X-basis measurement distributions over F_2^n.
Eigen::VectorXd z_distribution(const QuantumState& s);
Eigen::VectorXd x_distribution(const QuantumState& s);

struct SpreadReport {
  Basis basis = Basis::z;
  std::vector<Bits> s0, s1;
  double mass0 = 0, mass1 = 0, outside = 0;
  std::optional<std::size_t> separation;  // min Hamming distance between S^0 and S^1
  double mu = 0;
  bool spread = false;  // both masses >= mu
};

struct SpreadPair {
  SpreadReport x, z;
  bool in_sector = false;  // no mass outside G_X and G_Z
  bool dichotomy = false;  // x.spread || z.spread
};

SpreadPair measure_spread(const QuantumState& state, const ClusterPartition& part_x, const ClusterPartition& part_z,
                          const Logicals& logicals, double mu = kMuPrime, double tol = 1e-9);

struct UncertaintyResult {
  double trace_a = 0, trace_b = 0, bound = 0;
  bool holds = false;
};
// Throws PreconditionViolated unless A, B are anticommuting Hermitian involutions
// and rho is a density operator.
UncertaintyResult uncertainty_check(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const DensityMatrix& rho);

double depth_lower_bound(double n, double mu, double delta);
double nlts_depth_bound(double n, double mu, double delta);  // the bound plus one

struct EpsilonThreshold {
  double epsilon = 0, epsilon_prime = 0;
};
EpsilonThreshold epsilon_threshold(double eps0, double c1, double c2, double relative_distance);

nlohmann::json state_to_json(const QuantumState& s);
QuantumState state_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SpreadReport& r);
nlohmann::json to_json(const SpreadPair& r);

}  // namespace qtanner::nlts
