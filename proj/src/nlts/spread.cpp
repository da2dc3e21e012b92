#include "nlts/spread.hpp"

#include <cmath>
#include <limits>

namespace qtanner::nlts {

namespace {

std::size_t log2_exact(Eigen::Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0)
    throw StateDimensionMismatch("state dimension " + std::to_string(dim) + " is not a power of two");
  return static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(dim)));
}

// In-place unnormalized Walsh-Hadamard transform along the first axis.
template <class M>
void hadamard_rows(M& m) {
  const Eigen::Index dim = m.rows();
  for (Eigen::Index len = 1; len < dim; len <<= 1)
    for (Eigen::Index i = 0; i < dim; i += len << 1)
      for (Eigen::Index j = i; j < i + len; ++j) {
        auto a = m.row(j).eval();
        auto b = m.row(j + len).eval();
        m.row(j) = a + b;
        m.row(j + len) = a - b;
      }
}

std::optional<std::size_t> set_distance(std::size_t n, const std::vector<Bits>& a, const std::vector<Bits>& b) {
  if (a.empty() || b.empty()) return std::nullopt;
  const std::size_t total = std::size_t{1} << n;
  std::vector<int> dist(total, -1);
  std::vector<Bits> frontier(a.begin(), a.end());
  for (Bits v : a) dist[v] = 0;
  std::vector<bool> target(total, false);
  for (Bits v : b) target[v] = true;
  for (int d = 0; !frontier.empty(); ++d) {
    for (Bits v : frontier)
      if (target[v]) return static_cast<std::size_t>(d);
    std::vector<Bits> next;
    for (Bits v : frontier)
      for (std::size_t i = 0; i < n; ++i) {
        const Bits u = v ^ (Bits{1} << i);
        if (dist[u] < 0) {
          dist[u] = d + 1;
          next.push_back(u);
        }
      }
    frontier = std::move(next);
  }
  return std::nullopt;
}

SpreadReport spread_in(const Eigen::VectorXd& dist, const ClusterPartition& part, Bits logical, double mu, double tol) {
  SpreadReport r;
  r.basis = part.set.basis;
  r.mu = mu;
  double inside = 0;
  for (Bits y : part.set.members) {
    const bool b = dot(logical, part.decode(y));
    (b ? r.s1 : r.s0).push_back(y);
    (b ? r.mass1 : r.mass0) += dist(y);
    inside += dist(y);
  }
  r.outside = std::max(0.0, dist.sum() - inside);
  r.separation = set_distance(part.set.n, r.s0, r.s1);
  r.spread = r.mass0 >= mu - tol && r.mass1 >= mu - tol;
  return r;
}

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be a positive finite number");
}

}  // namespace

std::size_t qubit_count(const QuantumState& s) {
  if (const auto* v = std::get_if<StateVector>(&s)) return log2_exact(v->size());
  const auto& m = std::get<DensityMatrix>(s);
  if (m.rows() != m.cols()) throw StateDimensionMismatch("density matrix is not square");
  return log2_exact(m.rows());
}

Eigen::VectorXd z_distribution(const QuantumState& s) {
  qubit_count(s);
  if (const auto* v = std::get_if<StateVector>(&s)) return v->cwiseAbs2();
  return std::get<DensityMatrix>(s).diagonal().real();
}

Eigen::VectorXd x_distribution(const QuantumState& s) {
  const double dim = std::ldexp(1.0, static_cast<int>(qubit_count(s)));
  if (const auto* v = std::get_if<StateVector>(&s)) {
    Eigen::MatrixXcd w = *v;
    hadamard_rows(w);
    return w.col(0).cwiseAbs2() / dim;
  }
  Eigen::MatrixXcd w = std::get<DensityMatrix>(s);
  hadamard_rows(w);
  w.transposeInPlace();
  hadamard_rows(w);
  return w.diagonal().real() / dim;
}

SpreadPair measure_spread(const QuantumState& state, const ClusterPartition& part_x, const ClusterPartition& part_z,
                          const Logicals& logicals, double mu, double tol) {
  const std::size_t n = qubit_count(state);
  if (n != part_x.set.n || n != part_z.set.n)
    throw StateDimensionMismatch("state has " + std::to_string(n) + " qubits, partitions have " +
                                 std::to_string(part_z.set.n));
  if (part_x.set.basis != Basis::x || part_z.set.basis != Basis::z)
    throw InvalidArgument("measure_spread needs an X partition and a Z partition");
  SpreadPair out;
  out.z = spread_in(z_distribution(state), part_z, logicals.cx, mu, tol);
  out.x = spread_in(x_distribution(state), part_x, logicals.cz, mu, tol);
  out.in_sector = out.x.outside <= tol && out.z.outside <= tol;
  out.dichotomy = out.x.spread || out.z.spread;
  return out;
}

UncertaintyResult uncertainty_check(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const DensityMatrix& rho) {
  const auto dim = a.rows();
  if (a.cols() != dim || b.rows() != dim || b.cols() != dim || rho.rows() != dim || rho.cols() != dim)
    throw StateDimensionMismatch("operators and state must share one square dimension");
  constexpr double tol = 1e-12;
  auto check = [&](double norm, const char* what) {
    if (norm > tol) throw PreconditionViolated(std::string(what) + " violated, norm " + std::to_string(norm));
  };
  const auto id = Eigen::MatrixXcd::Identity(dim, dim);
  check((a - a.adjoint()).lpNorm<Eigen::Infinity>(), "A Hermitian");
  check((b - b.adjoint()).lpNorm<Eigen::Infinity>(), "B Hermitian");
  check((a * b + b * a).lpNorm<Eigen::Infinity>(), "AB + BA = 0");
  check((a * a - id).lpNorm<Eigen::Infinity>(), "A^2 = I");
  check((b * b - id).lpNorm<Eigen::Infinity>(), "B^2 = I");
  check((rho - rho.adjoint()).lpNorm<Eigen::Infinity>(), "rho Hermitian");
  check(std::abs(rho.trace() - 1.0), "Tr rho = 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) throw PreconditionViolated("rho positive semidefinite violated");
  UncertaintyResult r;
  r.trace_a = std::abs((a * rho).trace());
  r.trace_b = std::abs((b * rho).trace());
  r.bound = 0.5 + 0.5 / std::sqrt(2.0);
  r.holds = std::min(r.trace_a, r.trace_b) <= r.bound + 1e-9;
  return r;
}

double depth_lower_bound(double n, double mu, double delta) {
  require_positive(n, "n");
  require_positive(delta, "delta");
  if (!(mu > 0 && mu < 1)) throw DomainError("mu must lie in (0, 1)");
  return std::log(delta * delta * n / (400.0 * std::log(1.0 / mu))) / 3.0;
}

double nlts_depth_bound(double n, double mu, double delta) { return depth_lower_bound(n, mu, delta) + 1.0; }

EpsilonThreshold epsilon_threshold(double eps0, double c1, double c2, double relative_distance) {
  require_positive(eps0, "eps0");
  require_positive(c1, "c1");
  require_positive(c2, "c2");
  require_positive(relative_distance, "d/n");
  const double m = std::min({eps0 / 2, c2 / (4 * c1), relative_distance / (2 * c1)});
  const double eps = m / 1000;
  return {eps, 1000 * eps};
}

nlohmann::json state_to_json(const QuantumState& s) {
  auto pairs = [](const auto& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
    return a;
  };
  if (const auto* v = std::get_if<StateVector>(&s)) return pairs(*v);
  const auto& m = std::get<DensityMatrix>(s);
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(pairs(m.row(r).transpose().eval()));
  return {{"density", rows}};
}

QuantumState state_from_json(const nlohmann::json& j) {
  auto read = [](const nlohmann::json& a) {
    if (!a.is_array()) throw IoError("state must be an array of [re, im] pairs");
    StateVector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto& e = a[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw IoError("state entry " + std::to_string(i) + " is not a [re, im] pair");
      v(static_cast<Eigen::Index>(i)) = {e[0].get<double>(), e[1].get<double>()};
    }
    return v;
  };
  if (j.is_object() && j.contains("density")) {
    const auto& rows = j.at("density");
    if (!rows.is_array()) throw IoError("density must be an array of rows");
    DensityMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto row = read(rows[r]);
      if (row.size() != m.cols()) throw StateDimensionMismatch("density matrix is not square");
      m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    QuantumState s = m;
    qubit_count(s);
    return s;
  }
  QuantumState s = read(j);
  qubit_count(s);
  return s;
}

nlohmann::json to_json(const SpreadReport& r) {
  return {{"basis", to_string(r.basis)},
          {"S0_size", r.s0.size()},
          {"S1_size", r.s1.size()},
          {"mass0", r.mass0},
          {"mass1", r.mass1},
          {"outside", r.outside},
          {"separation", r.separation ? nlohmann::json(*r.separation) : nlohmann::json(nullptr)},
          {"mu", r.mu},
          {"spread", r.spread}};
}

nlohmann::json to_json(const SpreadPair& r) {
  return {{"X", to_json(r.x)}, {"Z", to_json(r.z)}, {"in_sector", r.in_sector}, {"dichotomy", r.dichotomy}};
}

}  // namespace qtanner::nlts
