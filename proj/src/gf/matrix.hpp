#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gf/field.hpp"

namespace qtanner::gf {

enum class Storage { automatic, dense, sparse };

// Matrices at or below this many entries are stored densely.
inline constexpr std::size_t kDenseEntryLimit = 1'000'000;

struct Entry {
  std::size_t col;
  Elem value;
  friend bool operator==(const Entry&, const Entry&) = default;
};

// Matrix over F_p, either dense row-major or sparse sorted row lists.
class FMatrix {
 public:
  FMatrix() = default;
  FMatrix(PrimeField field, std::size_t rows, std::size_t cols, Storage storage = Storage::automatic);

  static FMatrix identity(PrimeField field, std::size_t n);
  static FMatrix from_rows(PrimeField field, std::size_t cols, const std::vector<std::vector<Elem>>& rows);
  static FMatrix from_rows(PrimeField field, std::size_t cols, const std::vector<FVector>& rows);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_dense() const noexcept { return dense_; }

  Elem get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, Elem v);

  // Nonzero entries of row r in increasing column order.
  std::vector<Entry> row_entries(std::size_t r) const;
  FVector row(std::size_t r) const;
  void append_row(const FVector& v);

  std::size_t row_weight(std::size_t r) const;
  std::vector<std::size_t> column_weights() const;
  std::size_t max_row_weight() const;
  std::size_t max_col_weight() const;
  std::size_t nonzeros() const;

  FMatrix transpose() const;
  FVector multiply(const FVector& v) const;
  // this * other^T; used for the CSS orthogonality check.
  FMatrix multiply_transpose(const FMatrix& other) const;
  bool is_zero() const;

  std::vector<std::vector<Elem>> dense_rows() const;
  FMatrix with_storage(Storage storage) const;

  friend bool operator==(const FMatrix& a, const FMatrix& b);

 private:
  PrimeField field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  bool dense_ = true;
  std::vector<Elem> dense_data_;
  std::vector<std::vector<Entry>> sparse_rows_;
};

}  // namespace qtanner::gf
