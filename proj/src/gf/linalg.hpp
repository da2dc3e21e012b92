#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "gf/matrix.hpp"

namespace qtanner::gf {

inline constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();

// Global cap on the number of vectors an exhaustive enumeration may visit.
std::uint64_t enumeration_budget() noexcept;
void set_enumeration_budget(std::uint64_t budget) noexcept;
// Throws BudgetExceeded unless p^k fits within the budget.
void require_enumerable(std::uint32_t p, std::size_t k, const char* what);

// Incremental row echelon form. Each stored row has a unit pivot that is zero
// in every other stored row inserted after it, so reduction proceeds in
// insertion order. Over F_2 rows are bit-packed.
class Echelon {
 public:
  Echelon(PrimeField field, std::size_t cols);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t rank() const noexcept { return pivots_.size(); }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  FVector reduce(const FVector& v) const;
  bool contains(const FVector& v) const { return reduce(v).is_zero(); }
  // Adds v if it is independent of the stored rows; returns whether it was added.
  bool insert(const FVector& v);
  void insert_rows(const FMatrix& m);

  // Fully reduced basis sorted by pivot column.
  FMatrix reduced_basis() const;

 private:
  bool binary() const noexcept { return field_.p() == 2; }
  std::vector<std::uint64_t> pack(const FVector& v) const;
  FVector unpack(const std::vector<std::uint64_t>& bits) const;

  PrimeField field_;
  std::size_t cols_;
  std::size_t words_;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<std::uint64_t>> bit_rows_;
  std::vector<FVector> rows_;
};

std::size_t rank(const FMatrix& m);
FMatrix rref(const FMatrix& m);
FMatrix kernel_basis(const FMatrix& m);
bool in_rowspace(const FMatrix& m, const FVector& v);
std::optional<FVector> solve(const FMatrix& a, const FVector& b);
// A vector lambda with lambda^T a = 0 and lambda . b != 0, present iff a y = b is inconsistent.
std::optional<FVector> inconsistency_certificate(const FMatrix& a, const FVector& b);

class LinearCode {
 public:
  LinearCode() = default;
  static LinearCode from_generators(const FMatrix& gens);
  static LinearCode from_parity_check(const FMatrix& h);
  static LinearCode zero(PrimeField field, std::size_t n);
  static LinearCode full(PrimeField field, std::size_t n);

  const PrimeField& field() const noexcept { return basis_.field(); }
  std::size_t length() const noexcept { return basis_.cols(); }
  std::size_t dim() const noexcept { return basis_.rows(); }
  const FMatrix& basis() const noexcept { return basis_; }

  bool contains(const FVector& v) const;
  LinearCode dual() const;
  // Rows span the dual; a full-rank parity-check matrix for this code.
  FMatrix parity_check() const { return dual().basis(); }
  LinearCode intersect(const LinearCode& other) const;

  friend bool operator==(const LinearCode& a, const LinearCode& b);

 private:
  explicit LinearCode(FMatrix reduced) : basis_(std::move(reduced)) {}
  FMatrix basis_;
};

// min over c in the span of `basis` of |v + c|.
std::size_t coset_min_weight(const FVector& v, const FMatrix& basis);
std::size_t coset_min_weight(const FVector& v, const LinearCode& c);
// Minimum nonzero weight, or kInfinite for the zero code.
std::size_t min_distance(const LinearCode& c);

// Calls f(combination) for every vector in the span of the basis rows, in
// modular Gray order starting from 0. The visitor may return false to stop.
template <class F>
void for_each_in_span(const FMatrix& basis, F&& f) {
  const auto& field = basis.field();
  const std::size_t k = basis.rows();
  require_enumerable(field.p(), k, "span enumeration");
  std::vector<std::vector<Entry>> rows(k);
  for (std::size_t i = 0; i < k; ++i) rows[i] = basis.row_entries(i);
  FVector cur(field, basis.cols());
  if (!f(static_cast<const FVector&>(cur))) return;
  const std::uint64_t total = checked_pow(field.p(), k);
  for (std::uint64_t t = 1; t < total; ++t) {
    std::uint64_t u = t;
    std::size_t i = 0;
    while (u % field.p() == 0) {
      u /= field.p();
      ++i;
    }
    for (const auto& e : rows[i]) cur[e.col] = field.add(cur[e.col], e.value);
    if (!f(static_cast<const FVector&>(cur))) return;
  }
}

}  // namespace qtanner::gf
