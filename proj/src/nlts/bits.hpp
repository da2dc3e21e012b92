#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "gf/matrix.hpp"
#include "util/error.hpp"

namespace qtanner::nlts {

// F_2 vectors of length n <= 32 packed as bit i = coordinate i.
using Bits = std::uint32_t;

inline int popcount(Bits v) noexcept { return std::popcount(v); }
inline int dot(Bits a, Bits b) noexcept { return std::popcount(a & b) & 1; }

inline std::vector<Bits> row_masks(const gf::FMatrix& h) {
  if (h.field().p() != 2) throw UnsupportedField("bit-packed routines need p = 2");
  if (h.cols() > 32) throw PreconditionViolated("bit-packed routines need n <= 32");
  std::vector<Bits> out(h.rows(), 0);
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (const auto& e : h.row_entries(r)) out[r] |= Bits{1} << e.col;
  return out;
}

inline std::size_t syndrome_weight(const std::vector<Bits>& rows, Bits y) noexcept {
  std::size_t w = 0;
  for (Bits r : rows) w += static_cast<std::size_t>(dot(r, y));
  return w;
}

// Row space in echelon form keyed by highest bit; reduce() returns the unique
// coset member with no pivot bits set.
class BitEchelon {
 public:
  bool insert(Bits v) {
    v = reduce(v);
    if (v == 0) return false;
    basis_.push_back(v);
    std::sort(basis_.begin(), basis_.end(), std::greater<>());
    return true;
  }
  Bits reduce(Bits v) const noexcept {
    for (Bits b : basis_)
      if (v & std::bit_floor(b)) v ^= b;
    return v;
  }
  bool contains(Bits v) const noexcept { return reduce(v) == 0; }
  std::size_t rank() const noexcept { return basis_.size(); }
  const std::vector<Bits>& basis() const noexcept { return basis_; }

 private:
  std::vector<Bits> basis_;
};

inline BitEchelon span_of(const std::vector<Bits>& rows) {
  BitEchelon e;
  for (Bits r : rows) e.insert(r);
  return e;
}

// Basis of {y : <r, y> = 0 for all rows r}.
inline std::vector<Bits> kernel_masks(const std::vector<Bits>& rows, std::size_t n) {
  // Gaussian elimination on the rows, then read off free columns.
  std::vector<Bits> red;
  std::vector<int> pivot;
  for (Bits r : rows) {
    for (std::size_t i = 0; i < red.size(); ++i)
      if ((r >> pivot[i]) & 1) r ^= red[i];
    if (r == 0) continue;
    const int pc = std::countr_zero(r);
    for (std::size_t i = 0; i < red.size(); ++i)
      if ((red[i] >> pc) & 1) red[i] ^= r;
    red.push_back(r);
    pivot.push_back(pc);
  }
  Bits pivots = 0;
  for (int pc : pivot) pivots |= Bits{1} << pc;
  std::vector<Bits> out;
  for (std::size_t f = 0; f < n; ++f) {
    if ((pivots >> f) & 1) continue;
    Bits v = Bits{1} << f;
    for (std::size_t i = 0; i < red.size(); ++i)
      if ((red[i] >> f) & 1) v |= Bits{1} << pivot[i];
    out.push_back(v);
  }
  return out;
}

// Calls f on every element of span(basis).
template <class F>
void for_each_span(const std::vector<Bits>& basis, F&& f) {
  const std::uint64_t count = std::uint64_t{1} << basis.size();
  Bits v = 0;
  f(v);
  for (std::uint64_t t = 1; t < count; ++t) {
    v ^= basis[std::countr_zero(t)];
    f(v);
  }
}

}  // namespace qtanner::nlts
