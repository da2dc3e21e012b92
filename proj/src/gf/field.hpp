#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "util/error.hpp"

namespace qtanner::gf {

using Elem = std::uint32_t;

bool is_prime(std::uint64_t n);

// Prime field F_p with p < 2^16, so that products of two residues fit in 32 bits.
class PrimeField {
 public:
  PrimeField() = default;
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const noexcept { return p_; }

  Elem reduce(std::int64_t x) const noexcept {
    std::int64_t r = x % static_cast<std::int64_t>(p_);
    return static_cast<Elem>(r < 0 ? r + p_ : r);
  }
  Elem add(Elem a, Elem b) const noexcept {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const noexcept { return (a * b) % p_; }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_ = 2;
};

// A vector over F_p.
class FVector {
 public:
  FVector() = default;
  FVector(PrimeField field, std::size_t n) : field_(field), data_(n, 0) {}
  FVector(PrimeField field, std::vector<Elem> data);

  static FVector ones(PrimeField field, std::size_t n);
  static FVector unit(PrimeField field, std::size_t n, std::size_t i);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t size() const noexcept { return data_.size(); }
  Elem operator[](std::size_t i) const { return data_[i]; }
  Elem& operator[](std::size_t i) { return data_[i]; }
  std::span<const Elem> span() const noexcept { return data_; }
  std::span<Elem> span() noexcept { return data_; }
  const std::vector<Elem>& data() const noexcept { return data_; }

  std::size_t weight() const noexcept;
  bool is_zero() const noexcept { return weight() == 0; }

  FVector& operator+=(const FVector& other);
  FVector& operator-=(const FVector& other);
  FVector operator+(const FVector& other) const {
    FVector r = *this;
    r += other;
    return r;
  }
  FVector operator-(const FVector& other) const {
    FVector r = *this;
    r -= other;
    return r;
  }
  FVector scaled(Elem s) const;
  // this += s * other
  void axpy(Elem s, const FVector& other);
  Elem dot(const FVector& other) const;

  std::string to_string() const;

  friend bool operator==(const FVector& a, const FVector& b) {
    return a.field_ == b.field_ && a.data_ == b.data_;
  }
  friend auto operator<=>(const FVector& a, const FVector& b) { return a.data_ <=> b.data_; }

 private:
  PrimeField field_;
  std::vector<Elem> data_;
};

std::size_t hamming_weight(std::span<const Elem> v) noexcept;

// p^k, or nullopt-style saturation at UINT64_MAX on overflow.
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) noexcept;

}  // namespace qtanner::gf
