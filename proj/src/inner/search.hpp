#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "gf/linalg.hpp"
#include "inner/prodexp.hpp"
#include "json.hpp"

namespace qtanner::inner {

// Uniform over k-dimensional codes in F_p^n that contain the all-ones vector.
gf::LinearCode sample_planted_code(std::uint32_t p, std::size_t n, std::size_t k, std::uint64_t seed);

enum class Certification { vacuous, exact, screened, none };
std::string to_string(Certification c);
Certification certification_from_string(const std::string& s);

struct InnerCodePair {
  gf::LinearCode a, b;
  Certification certification = Certification::none;
  double rho_target = 0;
  // Exact product-expansion of (C_A, C_B) and (C_A^perp, C_B^perp) when computed.
  std::optional<double> rho_primal, rho_dual;
  std::size_t candidates_tried = 0;
  std::uint64_t seed = 0;
  std::string note;

  std::size_t delta() const noexcept { return a.length(); }
  double rate_a() const { return static_cast<double>(a.dim()) / static_cast<double>(delta()); }
  double rate_b() const { return static_cast<double>(b.dim()) / static_cast<double>(delta()); }
  // all-ones lies in C_A and in C_B^perp
  bool planted() const;
};

struct SearchOptions {
  std::size_t falsify_trials = 2000;
  bool property_star_filter = false;
};

InnerCodePair search_inner_pair(std::uint32_t p, std::size_t delta, std::size_t ka, std::size_t kb, double rho_target,
                                std::size_t budget, std::uint64_t seed, const SearchOptions& opts = {});

struct StarResult {
  bool holds = true;
  double alpha = 0;
  std::size_t max_sparse_weight = 0;
  std::uint64_t subspaces_checked = 0;
  // Basis of a violating subspace V when the property fails.
  std::optional<gf::FMatrix> witness;
};

// Property (*): for every m in 1..r and every m-dim V spanned by vectors of
// weight <= alpha n, dim(C cap V) < m/2. Default alpha = H_q^{-1}(r / 8n).
StarResult property_star_check(const gf::LinearCode& c, std::optional<double> alpha = std::nullopt);

nlohmann::json to_json(const InnerCodePair& pair);
InnerCodePair pair_from_json(const nlohmann::json& j);

}  // namespace qtanner::inner
