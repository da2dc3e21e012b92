#include "nlts/hamiltonian.hpp"

#include <cmath>
#include <numeric>

#include "gf/linalg.hpp"

namespace qtanner::nlts {

namespace {

std::size_t check_qubits(const tanner::CssCode& code) {
  if (code.field().p() != 2) throw UnsupportedField("code Hamiltonians need p = 2");
  if (code.n() > kMaxQubits)
    throw BudgetExceeded("code Hamiltonian needs n <= " + std::to_string(kMaxQubits) + ", got " + std::to_string(code.n()));
  return code.n();
}

}  // namespace

CodeHamiltonian build_code_hamiltonian(const tanner::CssCode& code) {
  CodeHamiltonian ham;
  ham.n = check_qubits(code);
  ham.x_terms = row_masks(code.hx);
  ham.z_terms = row_masks(code.hz);
  const std::size_t dim = std::size_t{1} << ham.n;
  ham.h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  if (!ham.x_terms.empty()) {
    const double w = 1.0 / (4.0 * static_cast<double>(ham.x_terms.size()));
    for (Bits t : ham.x_terms)
      for (std::size_t y = 0; y < dim; ++y) {
        ham.h(y, y) += w;
        ham.h(y ^ t, y) -= w;
      }
  }
  if (!ham.z_terms.empty()) {
    const double w = 1.0 / (2.0 * static_cast<double>(ham.z_terms.size()));
    for (std::size_t y = 0; y < dim; ++y)
      ham.h(y, y) += w * static_cast<double>(syndrome_weight(ham.z_terms, static_cast<Bits>(y)));
  }
  return ham;
}

Fraction sector_energy(const CodeHamiltonian& ham, Bits ex, Bits ez) {
  const std::uint64_t mx = std::max<std::size_t>(ham.x_terms.size(), 1);
  const std::uint64_t mz = std::max<std::size_t>(ham.z_terms.size(), 1);
  const std::uint64_t sx = syndrome_weight(ham.x_terms, ex), sz = syndrome_weight(ham.z_terms, ez);
  Fraction f{sx * mz + sz * mx, 2 * mx * mz};
  const auto g = std::gcd(f.num, f.den);
  f.num /= g;
  f.den /= g;
  return f;
}

std::vector<Bits> syndrome_representatives(const std::vector<Bits>& rows, std::size_t n) {
  const auto ker = span_of(kernel_masks(rows, n));
  std::vector<Bits> out;
  std::vector<bool> seen(std::size_t{1} << n, false);
  for (std::size_t v = 0; v < seen.size(); ++v) {
    const Bits key = ker.reduce(static_cast<Bits>(v));
    if (!seen[key]) {
      seen[key] = true;
      out.push_back(static_cast<Bits>(v));
    }
  }
  return out;
}

std::vector<Bits> logical_representatives(const tanner::CssCode& code) {
  const auto hx = row_masks(code.hx), hz = row_masks(code.hz);
  auto stab = span_of(hx);
  std::vector<Bits> basis;
  for (Bits v : kernel_masks(hz, code.n()))
    if (stab.insert(v)) basis.push_back(v);
  std::vector<Bits> out;
  for_each_span(basis, [&](Bits v) { out.push_back(v); });
  return out;
}

Logicals find_logicals(const tanner::CssCode& code) {
  const auto hx = row_masks(code.hx), hz = row_masks(code.hz);
  const std::size_t n = code.n();
  auto zspan = span_of(hz);
  Bits cx = 0;
  for (Bits v : kernel_masks(hx, n))
    if (!zspan.contains(v)) {
      cx = v;
      break;
    }
  if (cx == 0) throw PreconditionViolated("code has dimension 0; no logical operators");
  // cz in ker H_Z with cx . cz = 1: kernel of H_Z restricted by one more parity.
  for (Bits v : kernel_masks(hz, n))
    if (dot(v, cx)) return {cx, v};
  throw PreconditionViolated("no logical partner found");
}

StateVector sector_state(const tanner::CssCode& code, Bits ex, Bits ez, Bits y) {
  const std::size_t n = check_qubits(code);
  std::vector<Bits> stab = span_of(row_masks(code.hx)).basis();
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  const double amp = std::pow(2.0, -0.5 * static_cast<double>(stab.size()));
  for_each_span(stab, [&](Bits c) {
    const Bits z = y ^ c;
    v(z ^ ez) += dot(ex, z) ? -amp : amp;
  });
  return v;
}

SectorLawReport check_sector_law(const tanner::CssCode& code, const CodeHamiltonian& ham) {
  const std::size_t n = ham.n;
  SectorLawReport r;
  const auto xs = syndrome_representatives(ham.x_terms, n);
  const auto zs = syndrome_representatives(ham.z_terms, n);
  const auto logical = logical_representatives(code);
  std::vector<double> predicted;
  for (Bits ex : xs)
    for (Bits ez : zs) {
      const double e = sector_energy(ham, ex, ez).value();
      ++r.sectors;
      for (Bits y : logical) {
        const auto v = sector_state(code, ex, ez, y);
        r.max_residual = std::max(r.max_residual, (ham.h * v.real() - e * v.real()).norm());
        predicted.push_back(e);
      }
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ham.h, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  std::sort(predicted.begin(), predicted.end());
  r.max_spectrum_error = predicted.size() == static_cast<std::size_t>(ev.size()) ? 0.0 : 1.0;
  for (Eigen::Index i = 0; i < ev.size() && i < static_cast<Eigen::Index>(predicted.size()); ++i)
    r.max_spectrum_error = std::max(r.max_spectrum_error, std::abs(ev(i) - predicted[i]));
  r.expected_null_dimension = logical.size();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) <= 1e-9) ++r.null_dimension;
  r.min_eigenvalue = ev.minCoeff();
  r.max_eigenvalue = ev.maxCoeff();
  return r;
}

StateVector random_sector_state(const tanner::CssCode& code, double eps, Rng& rng) {
  const std::size_t n = check_qubits(code);
  const auto hx = row_masks(code.hx), hz = row_masks(code.hz);
  const double lx = eps * static_cast<double>(hx.size()) + 1e-9, lz = eps * static_cast<double>(hz.size()) + 1e-9;
  std::normal_distribution<double> gauss;
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  const auto logical = logical_representatives(code);
  for (Bits ex : syndrome_representatives(hx, n)) {
    if (static_cast<double>(syndrome_weight(hx, ex)) > lx) continue;
    for (Bits ez : syndrome_representatives(hz, n)) {
      if (static_cast<double>(syndrome_weight(hz, ez)) > lz) continue;
      for (Bits y : logical) {
        const std::complex<double> a(gauss(rng), gauss(rng));
        psi += a * sector_state(code, ex, ez, y);
      }
    }
  }
  return psi / psi.norm();
}

double energy(const CodeHamiltonian& ham, const StateVector& psi) {
  if (psi.size() != ham.h.rows()) throw StateDimensionMismatch("state dimension does not match the Hamiltonian");
  return (psi.adjoint() * (ham.h.cast<std::complex<double>>() * psi))(0).real();
}

nlohmann::json to_json(const SectorLawReport& r) {
  return {{"sectors", r.sectors},
          {"max_residual", r.max_residual},
          {"max_spectrum_error", r.max_spectrum_error},
          {"null_dimension", r.null_dimension},
          {"expected_null_dimension", r.expected_null_dimension},
          {"min_eigenvalue", r.min_eigenvalue},
          {"max_eigenvalue", r.max_eigenvalue},
          {"holds", r.holds()}};
}

}  // namespace qtanner::nlts
