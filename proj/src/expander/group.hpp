#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "util/error.hpp"

namespace qtanner::expander {

using BigIndex = boost::multiprecision::uint256_t;

struct Coords {
  std::uint64_t a = 0, b = 0, c = 0;
  friend bool operator==(const Coords&, const Coords&) = default;
  friend auto operator<=>(const Coords&, const Coords&) = default;
};

// 2x2 matrix [[m00, m01], [m10, m11]] with entries reduced mod p^{m+1}.
struct Mat2 {
  std::array<std::uint64_t, 4> e{1, 0, 0, 1};
  std::uint64_t& at(int r, int c) { return e[2 * r + c]; }
  std::uint64_t at(int r, int c) const { return e[2 * r + c]; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

// G_m = ker(SL2(Z/p^{m+1}) -> SL2(Z/p)), of order p^{3m}.
class CongruenceGroup {
 public:
  CongruenceGroup() = default;
  CongruenceGroup(std::uint32_t p, std::uint32_t m);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t m() const noexcept { return m_; }
  std::uint64_t q() const noexcept { return q_; }          // p^m
  std::uint64_t modulus() const noexcept { return mod_; }  // p^{m+1}
  // p^{3m} when it fits in 64 bits, otherwise 0.
  std::uint64_t order64() const noexcept { return order64_; }
  BigIndex order() const;

  Mat2 encode(const Coords& x) const;
  Coords decode(const Mat2& mat) const;
  Mat2 mul(const Mat2& x, const Mat2& y) const;
  Mat2 inv(const Mat2& x) const;
  std::uint64_t det(const Mat2& x) const;

  Coords mul(const Coords& x, const Coords& y) const { return decode(mul(encode(x), encode(y))); }
  Coords inv(const Coords& x) const { return decode(inv(encode(x))); }

  std::uint64_t index(const Coords& x) const { return x.a + q_ * (x.b + q_ * x.c); }
  Coords coords(std::uint64_t index) const;
  BigIndex big_index(const Coords& x) const;
  Coords coords(const BigIndex& index) const;

  // Reduction to a lower level m' <= m.
  Coords project(const Coords& x, std::uint32_t level) const;

  friend bool operator==(const CongruenceGroup& a, const CongruenceGroup& b) {
    return a.p_ == b.p_ && a.m_ == b.m_;
  }

 private:
  std::uint64_t mulmod(std::uint64_t x, std::uint64_t y, std::uint64_t mod) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % mod);
  }
  std::uint64_t inverse_mod(std::uint64_t x, std::uint64_t mod) const;

  std::uint32_t p_ = 3;
  std::uint32_t m_ = 1;
  std::uint64_t q_ = 3;
  std::uint64_t mod_ = 9;
  std::uint64_t order64_ = 27;
};

std::string to_string(const Mat2& x);

}  // namespace qtanner::expander
