#include "gf/field.hpp"

#include <limits>
#include <sstream>

namespace qtanner::gf {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p >= (1u << 16) || !is_prime(p)) {
    throw InvalidArgument("field modulus must be a prime below 2^16, got " + std::to_string(p));
  }
}

Elem PrimeField::inv(Elem a) const {
  if (a % p_ == 0) throw DomainError("inverse of zero in F_" + std::to_string(p_));
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p_, new_r = a % p_;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  return reduce(t);
}

FVector::FVector(PrimeField field, std::vector<Elem> data) : field_(field), data_(std::move(data)) {
  for (auto& x : data_) x %= field_.p();
}

FVector FVector::ones(PrimeField field, std::size_t n) {
  FVector v(field, n);
  for (auto& x : v.data_) x = 1;
  return v;
}

FVector FVector::unit(PrimeField field, std::size_t n, std::size_t i) {
  FVector v(field, n);
  v.data_.at(i) = 1;
  return v;
}

std::size_t hamming_weight(std::span<const Elem> v) noexcept {
  std::size_t w = 0;
  for (Elem x : v) w += (x != 0);
  return w;
}

std::size_t FVector::weight() const noexcept { return hamming_weight(data_); }

FVector& FVector::operator+=(const FVector& other) {
  if (other.size() != size()) throw DimensionMismatch("vector length mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = field_.add(data_[i], other.data_[i]);
  return *this;
}

FVector& FVector::operator-=(const FVector& other) {
  if (other.size() != size()) throw DimensionMismatch("vector length mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = field_.sub(data_[i], other.data_[i]);
  return *this;
}

FVector FVector::scaled(Elem s) const {
  FVector r = *this;
  for (auto& x : r.data_) x = field_.mul(x, s);
  return r;
}

void FVector::axpy(Elem s, const FVector& other) {
  if (other.size() != size()) throw DimensionMismatch("vector length mismatch");
  if (s == 0) return;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (other.data_[i]) data_[i] = field_.add(data_[i], field_.mul(s, other.data_[i]));
  }
}

Elem FVector::dot(const FVector& other) const {
  if (other.size() != size()) throw DimensionMismatch("vector length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    acc += static_cast<std::uint64_t>(data_[i]) * other.data_[i];
    if (acc >= (1ULL << 62)) acc %= field_.p();
  }
  return static_cast<Elem>(acc % field_.p());
}

std::string FVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < data_.size(); ++i) os << (i ? " " : "") << data_[i];
  os << ')';
  return os.str();
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) noexcept {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r *= base;
  }
  return r;
}

}  // namespace qtanner::gf
