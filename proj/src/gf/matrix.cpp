#include "gf/matrix.hpp"

#include <algorithm>

namespace qtanner::gf {

namespace {

bool choose_dense(std::size_t rows, std::size_t cols, Storage storage) {
  switch (storage) {
    case Storage::dense: return true;
    case Storage::sparse: return false;
    case Storage::automatic: break;
  }
  return cols == 0 || rows <= kDenseEntryLimit / cols;
}

}  // namespace

FMatrix::FMatrix(PrimeField field, std::size_t rows, std::size_t cols, Storage storage)
    : field_(field), rows_(rows), cols_(cols), dense_(choose_dense(rows, cols, storage)) {
  if (dense_) {
    dense_data_.assign(rows * cols, 0);
  } else {
    sparse_rows_.resize(rows);
  }
}

FMatrix FMatrix::identity(PrimeField field, std::size_t n) {
  FMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

FMatrix FMatrix::from_rows(PrimeField field, std::size_t cols,
                           const std::vector<std::vector<Elem>>& rows) {
  FMatrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch("row length does not match column count");
    for (std::size_t c = 0; c < cols; ++c) {
      if (rows[r][c] % field.p()) m.set(r, c, rows[r][c] % field.p());
    }
  }
  return m;
}

FMatrix FMatrix::from_rows(PrimeField field, std::size_t cols, const std::vector<FVector>& rows) {
  FMatrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch("row length does not match column count");
    for (std::size_t c = 0; c < cols; ++c) {
      if (rows[r][c]) m.set(r, c, rows[r][c]);
    }
  }
  return m;
}

Elem FMatrix::get(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw InvalidArgument("matrix index out of range");
  if (dense_) return dense_data_[r * cols_ + c];
  const auto& row = sparse_rows_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.col < col; });
  return (it != row.end() && it->col == c) ? it->value : 0;
}

void FMatrix::set(std::size_t r, std::size_t c, Elem v) {
  if (r >= rows_ || c >= cols_) throw InvalidArgument("matrix index out of range");
  v %= field_.p();
  if (dense_) {
    dense_data_[r * cols_ + c] = v;
    return;
  }
  auto& row = sparse_rows_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.col < col; });
  if (it != row.end() && it->col == c) {
    if (v == 0) {
      row.erase(it);
    } else {
      it->value = v;
    }
  } else if (v != 0) {
    row.insert(it, Entry{c, v});
  }
}

std::vector<Entry> FMatrix::row_entries(std::size_t r) const {
  if (r >= rows_) throw InvalidArgument("row index out of range");
  if (!dense_) return sparse_rows_[r];
  std::vector<Entry> out;
  const Elem* base = dense_data_.data() + r * cols_;
  for (std::size_t c = 0; c < cols_; ++c) {
    if (base[c]) out.push_back({c, base[c]});
  }
  return out;
}

FVector FMatrix::row(std::size_t r) const {
  FVector v(field_, cols_);
  for (const auto& e : row_entries(r)) v[e.col] = e.value;
  return v;
}

void FMatrix::append_row(const FVector& v) {
  if (v.size() != cols_) throw DimensionMismatch("appended row has wrong length");
  ++rows_;
  if (dense_) {
    dense_data_.insert(dense_data_.end(), v.data().begin(), v.data().end());
  } else {
    std::vector<Entry> row;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (v[c]) row.push_back({c, v[c]});
    }
    sparse_rows_.push_back(std::move(row));
  }
}

std::size_t FMatrix::row_weight(std::size_t r) const {
  if (!dense_) return sparse_rows_.at(r).size();
  return hamming_weight(std::span<const Elem>(dense_data_.data() + r * cols_, cols_));
}

std::vector<std::size_t> FMatrix::column_weights() const {
  std::vector<std::size_t> w(cols_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (dense_) {
      const Elem* base = dense_data_.data() + r * cols_;
      for (std::size_t c = 0; c < cols_; ++c) w[c] += (base[c] != 0);
    } else {
      for (const auto& e : sparse_rows_[r]) ++w[e.col];
    }
  }
  return w;
}

std::size_t FMatrix::max_row_weight() const {
  std::size_t m = 0;
  for (std::size_t r = 0; r < rows_; ++r) m = std::max(m, row_weight(r));
  return m;
}

std::size_t FMatrix::max_col_weight() const {
  auto w = column_weights();
  return w.empty() ? 0 : *std::max_element(w.begin(), w.end());
}

std::size_t FMatrix::nonzeros() const {
  std::size_t n = 0;
  for (std::size_t r = 0; r < rows_; ++r) n += row_weight(r);
  return n;
}

FMatrix FMatrix::transpose() const {
  FMatrix t(field_, cols_, rows_, dense_ ? Storage::dense : Storage::sparse);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (const auto& e : row_entries(r)) {
      if (t.dense_) {
        t.dense_data_[e.col * rows_ + r] = e.value;
      } else {
        t.sparse_rows_[e.col].push_back({r, e.value});
      }
    }
  }
  return t;
}

FVector FMatrix::multiply(const FVector& v) const {
  if (v.size() != cols_) throw DimensionMismatch("matrix-vector dimension mismatch");
  FVector out(field_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    for (const auto& e : row_entries(r)) acc += static_cast<std::uint64_t>(e.value) * v[e.col];
    out[r] = static_cast<Elem>(acc % field_.p());
  }
  return out;
}

FMatrix FMatrix::multiply_transpose(const FMatrix& other) const {
  if (other.cols_ != cols_) throw DimensionMismatch("multiply_transpose column mismatch");
  // Column-indexed view of `other` so each row product only touches overlaps.
  std::vector<std::vector<Entry>> by_col(cols_);
  for (std::size_t r = 0; r < other.rows_; ++r) {
    for (const auto& e : other.row_entries(r)) by_col[e.col].push_back({r, e.value});
  }
  FMatrix out(field_, rows_, other.rows_);
  std::vector<std::uint64_t> acc(other.rows_, 0);
  std::vector<std::size_t> touched;
  for (std::size_t r = 0; r < rows_; ++r) {
    touched.clear();
    for (const auto& e : row_entries(r)) {
      for (const auto& o : by_col[e.col]) {
        if (acc[o.col] == 0) touched.push_back(o.col);
        acc[o.col] += static_cast<std::uint64_t>(e.value) * o.value;
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::size_t c : touched) {
      Elem v = static_cast<Elem>(acc[c] % field_.p());
      if (v) out.set(r, c, v);
      acc[c] = 0;
    }
  }
  return out;
}

bool FMatrix::is_zero() const {
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_weight(r) != 0) return false;
  }
  return true;
}

std::vector<std::vector<Elem>> FMatrix::dense_rows() const {
  std::vector<std::vector<Elem>> out(rows_, std::vector<Elem>(cols_, 0));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (const auto& e : row_entries(r)) out[r][e.col] = e.value;
  }
  return out;
}

FMatrix FMatrix::with_storage(Storage storage) const {
  FMatrix m(field_, rows_, cols_, storage);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (const auto& e : row_entries(r)) m.set(r, e.col, e.value);
  }
  return m;
}

bool operator==(const FMatrix& a, const FMatrix& b) {
  if (!(a.field_ == b.field_) || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t r = 0; r < a.rows_; ++r) {
    if (a.row_entries(r) != b.row_entries(r)) return false;
  }
  return true;
}

}  // namespace qtanner::gf
