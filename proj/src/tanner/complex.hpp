#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include "expander/cayley.hpp"

namespace qtanner::tanner {

// How a face's (i, j) labels map to grid coordinates in the local view Q(v).
// local_inverse: corners other than 00 see the inverse-paired index along each
// generator direction used to reach them. direct: every corner sees (i, j).
enum class GridConvention { local_inverse, direct };
std::string to_string(GridConvention c);
GridConvention grid_convention_from_string(const std::string& s);

enum class Corner { v00 = 0, v01 = 1, v10 = 2, v11 = 3 };

// Square Cayley complex on G x {0,1}^2 with A acting on the left and B on the right.
// Face (g, i, j) has index g * delta^2 + i * delta + j and corners
// (g,00), (a_i g,01), (g b_j,10), (a_i g b_j,11).
class SquareComplex {
 public:
  SquareComplex(expander::GeneratorMultiset a, expander::GeneratorMultiset b);

  const expander::CayleyMultigraph& graph_a() const noexcept { return a_; }
  const expander::CayleyMultigraph& graph_b() const noexcept { return b_; }
  std::size_t delta() const noexcept { return delta_; }
  std::uint64_t group_order() const noexcept { return order_; }
  std::uint64_t face_count() const noexcept { return order_ * delta_ * delta_; }

  std::uint64_t face(std::uint64_t g, std::size_t i, std::size_t j) const { return (g * delta_ + i) * delta_ + j; }
  // Group element of each corner of a face, indexed by Corner.
  std::array<std::uint64_t, 4> corners(std::uint64_t face) const;
  // Face occupying grid cell (r, s) of Q((h, corner)).
  std::uint64_t local_face(Corner corner, std::uint64_t h, std::size_t r, std::size_t s, GridConvention conv) const;

 private:
  expander::CayleyMultigraph a_, b_;
  std::size_t delta_;
  std::uint64_t order_;
};

SquareComplex build_complex(const expander::GeneratorMultiset& a, const expander::GeneratorMultiset& b);

}  // namespace qtanner::tanner
