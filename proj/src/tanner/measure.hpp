#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tanner/code.hpp"

namespace qtanner::tanner {

struct SideDistance {
  std::size_t weight = gf::kInfinite;  // kInfinite when there are no logicals
  std::optional<gf::FVector> witness;
};

struct DistanceReport {
  bool exact = false;
  std::size_t trials = 0;
  SideDistance z;  // ker H_Z minus rowspace H_X
  SideDistance x;  // ker H_X minus rowspace H_Z
  std::size_t d() const { return std::min(z.weight, x.weight); }
};

// Exact when the kernels can be enumerated within the budget, otherwise an
// upper bound from randomized information-set sampling.
DistanceReport estimate_distance(const CssCode& code, std::size_t trials, std::uint64_t seed);

struct SsexpPoint {
  double eps = 0;
  std::size_t max_weight = 0;
  std::size_t samples = 0;
  std::size_t excluded = 0;  // y in the dual code (0/0)
  bool exhaustive = false;
  bool exact_coset = false;
  // min over samples of (|H y|/m) / (|y|_perp / n); +inf when no sample counted
  double c2 = 0;
  double worst_syndrome = 0, worst_coset = 0;
};

struct SsexpCurve {
  std::string side;  // "boundary" (H_Z against C_X^perp) or "coboundary" (H_X against C_Z^perp)
  std::vector<SsexpPoint> points;
};

std::pair<SsexpCurve, SsexpCurve> estimate_ssexp(const CssCode& code, const std::vector<double>& eps_grid,
                                                 std::size_t trials, std::uint64_t seed);

nlohmann::json to_json(const DistanceReport& r);
nlohmann::json to_json(const SsexpCurve& c);

}  // namespace qtanner::tanner
