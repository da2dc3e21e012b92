#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "gf/linalg.hpp"
#include "inner/search.hpp"
#include "json.hpp"
#include "tanner/complex.hpp"

namespace qtanner::tanner {

// CSS(C_X = ker H_X, C_Z = ker H_Z).
struct CssCode {
  gf::FMatrix hx, hz;
  std::string name;
  nlohmann::json provenance = nlohmann::json::object();

  const gf::PrimeField& field() const noexcept { return hx.field(); }
  std::size_t n() const noexcept { return hx.cols(); }
  std::size_t locality() const;
  bool orthogonal() const { return hx.multiply_transpose(hz).is_zero(); }
};

// Validates shapes and H_X H_Z^T = 0.
CssCode make_css(gf::FMatrix hx, gf::FMatrix hz, std::string name = {});

CssCode build_code(const SquareComplex& complex, const inner::InnerCodePair& pair,
                   GridConvention conv = GridConvention::local_inverse);

struct DimensionReport {
  std::size_t n = 0, rank_x = 0, rank_z = 0, k = 0;
  std::optional<double> counting_bound;  // -(1-2R_A)(1-2R_B) n for Tanner codes
};
DimensionReport code_dimension(const CssCode& code);

struct PlantedReport {
  bool one_in_cx = false, one_in_cz = false;
  bool one_not_in_cz_perp = false, one_not_in_cx_perp = false;
  bool row_sums_zero = false;
  std::uint32_t n_mod_p = 0;
  bool all() const {
    return one_in_cx && one_in_cz && one_not_in_cz_perp && one_not_in_cx_perp && row_sums_zero && n_mod_p != 0;
  }
};
PlantedReport verify_planted(const CssCode& code);

CssCode steane_code();
CssCode shor_code();
CssCode toy_code(const std::string& name);

nlohmann::json to_json(const CssCode& code);
CssCode code_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DimensionReport& r);
nlohmann::json to_json(const PlantedReport& r);

}  // namespace qtanner::tanner
