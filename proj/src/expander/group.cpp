#include "expander/group.hpp"

#include <sstream>

#include "gf/field.hpp"

namespace qtanner::expander {

CongruenceGroup::CongruenceGroup(std::uint32_t p, std::uint32_t m) : p_(p), m_(m) {
  if (!gf::is_prime(p)) throw InvalidArgument("group prime must be prime, got " + std::to_string(p));
  if (m < 1) throw InvalidArgument("group level m must be at least 1");
  const std::uint64_t mod = gf::checked_pow(p, m + 1);
  if (mod >= (std::uint64_t{1} << 62)) throw InvalidArgument("p^(m+1) must be below 2^62");
  q_ = mod / p;
  mod_ = mod;
  const std::uint64_t ord = gf::checked_pow(p, 3 * static_cast<std::uint64_t>(m));
  order64_ = ord == UINT64_MAX ? 0 : ord;
}

BigIndex CongruenceGroup::order() const {
  BigIndex q = q_;
  return q * q * q;
}

std::uint64_t CongruenceGroup::inverse_mod(std::uint64_t x, std::uint64_t mod) const {
  __int128 t = 0, nt = 1, r = mod, nr = x % mod;
  while (nr != 0) {
    __int128 quot = r / nr;
    t -= quot * nt;
    std::swap(t, nt);
    r -= quot * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw DomainError("element not invertible modulo p^k");
  if (t < 0) t += mod;
  return static_cast<std::uint64_t>(t);
}

Mat2 CongruenceGroup::encode(const Coords& x) const {
  if (x.a >= q_ || x.b >= q_ || x.c >= q_) throw InvalidArgument("group coordinates must lie in [0, p^m)");
  // d = (1 + p a)^{-1} (p b c - a) mod p^m
  const std::uint64_t unit = (1 + mulmod(p_, x.a, q_)) % q_;
  const std::uint64_t pbc = mulmod(p_, mulmod(x.b, x.c, q_), q_);
  const std::uint64_t rhs = (pbc + q_ - x.a) % q_;
  const std::uint64_t d = mulmod(inverse_mod(unit, q_), rhs, q_);
  Mat2 out;
  out.e = {(1 + p_ * x.a) % mod_, (p_ * x.b) % mod_, (p_ * x.c) % mod_, (1 + p_ * d) % mod_};
  return out;
}

std::uint64_t CongruenceGroup::det(const Mat2& x) const {
  return (mulmod(x.at(0, 0), x.at(1, 1), mod_) + mod_ - mulmod(x.at(0, 1), x.at(1, 0), mod_)) % mod_;
}

Coords CongruenceGroup::decode(const Mat2& mat) const {
  for (auto v : mat.e) {
    if (v >= mod_) throw NotInKernel("matrix entries must be reduced mod p^(m+1)");
  }
  if (mat.at(0, 0) % p_ != 1 % p_ || mat.at(1, 1) % p_ != 1 % p_ || mat.at(0, 1) % p_ || mat.at(1, 0) % p_) {
    throw NotInKernel("matrix is not congruent to the identity mod p");
  }
  if (det(mat) != 1 % mod_) throw NotInKernel("matrix determinant is not 1 mod p^(m+1)");
  return Coords{(mat.at(0, 0) + mod_ - 1) % mod_ / p_, mat.at(0, 1) / p_, mat.at(1, 0) / p_};
}

Mat2 CongruenceGroup::mul(const Mat2& x, const Mat2& y) const {
  Mat2 out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out.at(r, c) = (mulmod(x.at(r, 0), y.at(0, c), mod_) + mulmod(x.at(r, 1), y.at(1, c), mod_)) % mod_;
    }
  }
  return out;
}

Mat2 CongruenceGroup::inv(const Mat2& x) const {
  Mat2 out;
  out.e = {x.at(1, 1), (mod_ - x.at(0, 1)) % mod_, (mod_ - x.at(1, 0)) % mod_, x.at(0, 0)};
  return out;
}

Coords CongruenceGroup::coords(std::uint64_t index) const {
  if (order64_ == 0 || index >= order64_) throw InvalidArgument("vertex index out of range");
  return Coords{index % q_, (index / q_) % q_, index / q_ / q_};
}

BigIndex CongruenceGroup::big_index(const Coords& x) const {
  BigIndex q = q_;
  return BigIndex(x.a) + q * (BigIndex(x.b) + q * BigIndex(x.c));
}

Coords CongruenceGroup::coords(const BigIndex& index) const {
  if (index >= order()) throw InvalidArgument("vertex index out of range");
  const BigIndex q = q_;
  return Coords{static_cast<std::uint64_t>(index % q), static_cast<std::uint64_t>((index / q) % q),
                static_cast<std::uint64_t>(index / q / q)};
}

Coords CongruenceGroup::project(const Coords& x, std::uint32_t level) const {
  if (level < 1 || level > m_) throw InvalidArgument("projection level out of range");
  const std::uint64_t ql = gf::checked_pow(p_, level);
  return Coords{x.a % ql, x.b % ql, x.c % ql};
}

std::string to_string(const Mat2& x) {
  std::ostringstream os;
  os << "[[" << x.at(0, 0) << "," << x.at(0, 1) << "],[" << x.at(1, 0) << "," << x.at(1, 1) << "]]";
  return os.str();
}

}  // namespace qtanner::expander
