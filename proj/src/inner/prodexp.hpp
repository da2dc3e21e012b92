#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gf/linalg.hpp"
#include "json.hpp"

namespace qtanner::inner {

// n x n array over F_p, row-major: entry (i, j) at i * n + j. Columns of
// C1 (x) F^n lie in C1; rows of F^n (x) C2 lie in C2.
using Grid = std::vector<gf::Elem>;

Grid tensor(const gf::FVector& a, const gf::FVector& b);
std::size_t grid_weight(const Grid& x);
std::size_t nonzero_columns(const Grid& x, std::size_t n);
std::size_t nonzero_rows(const Grid& x, std::size_t n);

struct ProductExpansionReport {
  std::string mode = "exact";
  bool vacuous = false;  // the space C1 (x) F^n + F^n (x) C2 is {0}
  std::size_t n = 0;
  // rho* = weight / (n * cost) at the witness
  std::uint64_t weight = 0;
  std::uint64_t cost = 0;
  double rho = 0;
  Grid witness;
  std::uint64_t visited = 0;
};

ProductExpansionReport product_expansion_exact(const gf::LinearCode& c1, const gf::LinearCode& c2);

// min over y in C1 (x) C2 of |c + y|_col + |r - y|_row, given one decomposition x = c + r.
std::size_t decomposition_cost(const gf::LinearCode& c1, const gf::LinearCode& c2, const Grid& c, const Grid& r);

// Minimum number of rows plus columns covering the support of x; a lower bound
// on the cost of every decomposition.
std::size_t line_cover_bound(const Grid& x, std::size_t n);

struct FalsifyWitness {
  Grid x;
  std::uint64_t weight = 0;
  std::uint64_t cost_lower = 0;
  bool cost_exact = false;
};

// Random search for x with |x| < rho * n * D(x); a returned witness is a true violation.
std::optional<FalsifyWitness> product_expansion_falsify(const gf::LinearCode& c1, const gf::LinearCode& c2, double rho,
                                                        std::size_t trials, std::uint64_t seed);

nlohmann::json to_json(const ProductExpansionReport& r);

}  // namespace qtanner::inner
