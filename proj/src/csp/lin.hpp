#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gf/linalg.hpp"
#include "json.hpp"
#include "tanner/code.hpp"

namespace qtanner::csp {

struct LinConstraint {
  std::vector<std::uint64_t> vars;
  std::vector<gf::Elem> coeffs;
  gf::Elem rhs = 0;
  bool operator==(const LinConstraint&) const = default;
};

// sum_j coeffs[j] * y[vars[j]] = rhs over F_p, one equation per code coordinate.
struct LinInstance {
  std::uint32_t p = 2;
  std::uint64_t m = 0;  // variables
  std::vector<LinConstraint> constraints;
  std::size_t arity = 0;  // max constraint size
  nlohmann::json provenance = nlohmann::json::object();

  std::size_t n() const noexcept { return constraints.size(); }
  gf::FMatrix matrix() const;  // n x m coefficient matrix
  gf::FVector rhs() const;
};

// Constraint i is column i of H_Z with right-hand side beta_i. Requires beta in C_X \ C_Z^perp.
LinInstance emit_lin_instance(const tanner::CssCode& code, const gf::FVector& beta);
LinInstance emit_planted_instance(const tanner::CssCode& code);  // beta = all ones

// Computes a single constraint of the beta = 1 instance of a Tanner code from its
// provenance alone, touching only the two local views that contain face i.
class ConstraintOracle {
 public:
  explicit ConstraintOracle(const nlohmann::json& provenance);
  ~ConstraintOracle();
  ConstraintOracle(ConstraintOracle&&) noexcept;
  ConstraintOracle& operator=(ConstraintOracle&&) noexcept;

  std::uint64_t n() const;
  std::uint64_t m() const;
  std::uint32_t p() const;
  LinConstraint constraint(std::uint64_t i) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct UnsatReport {
  bool inconsistent = false;
  std::optional<gf::FVector> certificate;  // lambda with lambda^T A = 0, lambda . b != 0
  std::optional<gf::FVector> assignment;   // when consistent
};
UnsatReport certify_unsat(const LinInstance& inst);

enum class SatMode { exact, local_search };
std::string to_string(SatMode m);
SatMode sat_mode_from_string(const std::string& s);

struct SatReport {
  SatMode mode = SatMode::exact;
  std::size_t satisfied = 0, total = 0;
  double fraction = 0;
  std::vector<gf::Elem> assignment;
  std::uint64_t evaluated = 0;
  std::optional<double> soundness;  // c1: compared against 1 - c1
  std::string verdict;
};

struct SatOptions {
  std::uint64_t budget = 0;  // 0: global enumeration budget
  std::size_t restarts = 32;
  std::size_t max_steps = 0;  // 0: 20 * (m + 1) per restart
  std::optional<double> c1;
};
SatReport max_sat(const LinInstance& inst, SatMode mode, std::uint64_t seed, const SatOptions& opts = {});
std::size_t count_satisfied(const LinInstance& inst, const std::vector<gf::Elem>& y);

double sos_level_bound(double c1, double c2, double m, double arity);

struct XorClause {
  std::vector<std::uint64_t> vars;  // at most three
  std::uint8_t rhs = 0;
};
struct XorInstance {
  std::uint64_t vars = 0, original_vars = 0;
  std::vector<XorClause> clauses;
};

XorInstance reduce_to_3xor(const LinInstance& inst);
LinInstance to_lin(const XorInstance& x);

nlohmann::json to_json(const LinInstance& inst);
LinInstance lin_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LinConstraint& c);
nlohmann::json to_json(const UnsatReport& r);
nlohmann::json to_json(const SatReport& r);
nlohmann::json to_json(const XorInstance& x);
std::string to_dimacs(const XorInstance& x);

}  // namespace qtanner::csp
