#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "gf/linalg.hpp"

namespace qtanner::gf {

// alist-style text: "rows cols", "maxrow maxcol", the row weights, the column
// weights, then one line of 1-based column indices per row and one line of
// 1-based row indices per column. For p > 2 each index carries ":value".
std::string to_alist(const FMatrix& m);
FMatrix from_alist(const std::string& text, std::uint32_t p);

nlohmann::json to_json(const FMatrix& m);
FMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FVector& v);
FVector vector_from_json(const nlohmann::json& j, PrimeField field);

}  // namespace qtanner::gf
