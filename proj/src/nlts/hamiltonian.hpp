#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "json.hpp"
#include "nlts/bits.hpp"
#include "tanner/code.hpp"
#include "util/rng.hpp"

namespace qtanner::nlts {

inline constexpr std::size_t kMaxQubits = 12;

// H = (H_X + H_Z) / 2 with H_X = mean over X checks of (I - X^h)/2 and H_Z the
// same with Z^h; real symmetric in the computational basis.
struct CodeHamiltonian {
  std::size_t n = 0;
  std::vector<Bits> x_terms, z_terms;
  Eigen::MatrixXd h;
};

CodeHamiltonian build_code_hamiltonian(const tanner::CssCode& code);

// Exact energy of the sector X^{e_Z} Z^{e_X} C as a fraction.
struct Fraction {
  std::uint64_t num = 0, den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Fraction& o) const { return num * o.den == o.num * den; }
};
Fraction sector_energy(const CodeHamiltonian& ham, Bits ex, Bits ez);

// Anticommuting logical pair: cx in C_X \ C_Z^perp, cz in C_Z \ C_X^perp, cx . cz = 1.
struct Logicals {
  Bits cx = 0, cz = 0;
};
Logicals find_logicals(const tanner::CssCode& code);

// Coset representatives (least in index order) of F_2^n / ker(rows).
std::vector<Bits> syndrome_representatives(const std::vector<Bits>& rows, std::size_t n);
// Representatives of C_Z / C_X^perp.
std::vector<Bits> logical_representatives(const tanner::CssCode& code);

using StateVector = Eigen::VectorXcd;

// X^{ez} Z^{ex} |y + C_X^perp>, normalized.
StateVector sector_state(const tanner::CssCode& code, Bits ex, Bits ez, Bits y);

struct SectorLawReport {
  std::size_t sectors = 0;
  double max_residual = 0;      // max over sectors of ||H v - E v||
  double max_spectrum_error = 0;  // sorted eigenvalues vs the predicted multiset
  std::size_t null_dimension = 0, expected_null_dimension = 0;
  double min_eigenvalue = 0, max_eigenvalue = 0;
  bool holds(double tol = 1e-9) const {
    return max_residual <= tol && max_spectrum_error <= tol && null_dimension == expected_null_dimension;
  }
};
SectorLawReport check_sector_law(const tanner::CssCode& code, const CodeHamiltonian& ham);

// Random normalized state in the span of sectors with |H_X e_X| <= eps m_X and
// |H_Z e_Z| <= eps m_Z.
StateVector random_sector_state(const tanner::CssCode& code, double eps, Rng& rng);

double energy(const CodeHamiltonian& ham, const StateVector& psi);

nlohmann::json to_json(const SectorLawReport& r);

}  // namespace qtanner::nlts
