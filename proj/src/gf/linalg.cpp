#include "gf/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <string>

namespace qtanner::gf {

namespace {

std::atomic<std::uint64_t> g_budget{std::uint64_t{1} << 24};

std::size_t first_nonzero(const FVector& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i]) return i;
  }
  return v.size();
}

}  // namespace

std::uint64_t enumeration_budget() noexcept { return g_budget.load(); }
void set_enumeration_budget(std::uint64_t budget) noexcept { g_budget.store(budget); }

void require_enumerable(std::uint32_t p, std::size_t k, const char* what) {
  const std::uint64_t count = checked_pow(p, k);
  if (count > enumeration_budget()) {
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(p) + "^" + std::to_string(k) +
                         " exceeds enumeration budget " + std::to_string(enumeration_budget()));
  }
}

Echelon::Echelon(PrimeField field, std::size_t cols)
    : field_(field), cols_(cols), words_((cols + 63) / 64) {}

std::vector<std::uint64_t> Echelon::pack(const FVector& v) const {
  std::vector<std::uint64_t> bits(words_, 0);
  for (std::size_t i = 0; i < cols_; ++i) {
    if (v[i]) bits[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return bits;
}

FVector Echelon::unpack(const std::vector<std::uint64_t>& bits) const {
  FVector v(field_, cols_);
  for (std::size_t i = 0; i < cols_; ++i) v[i] = (bits[i >> 6] >> (i & 63)) & 1;
  return v;
}

FVector Echelon::reduce(const FVector& v) const {
  if (v.size() != cols_) throw DimensionMismatch("echelon: vector length mismatch");
  if (binary()) {
    auto bits = pack(v);
    for (std::size_t r = 0; r < pivots_.size(); ++r) {
      const std::size_t pc = pivots_[r];
      if ((bits[pc >> 6] >> (pc & 63)) & 1) {
        const auto& row = bit_rows_[r];
        for (std::size_t w = 0; w < words_; ++w) bits[w] ^= row[w];
      }
    }
    return unpack(bits);
  }
  FVector out = v;
  for (std::size_t r = 0; r < pivots_.size(); ++r) {
    const Elem c = out[pivots_[r]];
    if (c) out.axpy(field_.neg(c), rows_[r]);
  }
  return out;
}

bool Echelon::insert(const FVector& v) {
  if (binary()) {
    if (v.size() != cols_) throw DimensionMismatch("echelon: vector length mismatch");
    auto bits = pack(v);
    for (std::size_t r = 0; r < pivots_.size(); ++r) {
      const std::size_t pc = pivots_[r];
      if ((bits[pc >> 6] >> (pc & 63)) & 1) {
        const auto& row = bit_rows_[r];
        for (std::size_t w = 0; w < words_; ++w) bits[w] ^= row[w];
      }
    }
    for (std::size_t w = 0; w < words_; ++w) {
      if (bits[w]) {
        pivots_.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits[w])));
        bit_rows_.push_back(std::move(bits));
        return true;
      }
    }
    return false;
  }
  FVector res = reduce(v);
  const std::size_t pc = first_nonzero(res);
  if (pc == cols_) return false;
  res = res.scaled(field_.inv(res[pc]));
  pivots_.push_back(pc);
  rows_.push_back(std::move(res));
  return true;
}

void Echelon::insert_rows(const FMatrix& m) {
  if (m.cols() != cols_) throw DimensionMismatch("echelon: matrix width mismatch");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (rank() == cols_) return;
    insert(m.row(r));
  }
}

FMatrix Echelon::reduced_basis() const {
  const std::size_t k = pivots_.size();
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots_[a] < pivots_[b]; });

  if (binary()) {
    std::vector<std::vector<std::uint64_t>> rows;
    std::vector<std::size_t> piv;
    for (std::size_t i : order) {
      rows.push_back(bit_rows_[i]);
      piv.push_back(pivots_[i]);
    }
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t pc = piv[i];
      for (std::size_t j = 0; j < k; ++j) {
        if (j != i && ((rows[j][pc >> 6] >> (pc & 63)) & 1)) {
          for (std::size_t w = 0; w < words_; ++w) rows[j][w] ^= rows[i][w];
        }
      }
    }
    FMatrix out(field_, k, cols_);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t word = rows[i][w];
        while (word) {
          out.set(i, w * 64 + static_cast<std::size_t>(std::countr_zero(word)), 1);
          word &= word - 1;
        }
      }
    }
    return out;
  }

  std::vector<FVector> rows;
  std::vector<std::size_t> piv;
  for (std::size_t i : order) {
    rows.push_back(rows_[i]);
    piv.push_back(pivots_[i]);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const Elem c = rows[j][piv[i]];
      if (j != i && c) rows[j].axpy(field_.neg(c), rows[i]);
    }
  }
  return FMatrix::from_rows(field_, cols_, rows);
}

std::size_t rank(const FMatrix& m) {
  Echelon e(m.field(), m.cols());
  e.insert_rows(m);
  return e.rank();
}

FMatrix rref(const FMatrix& m) {
  Echelon e(m.field(), m.cols());
  e.insert_rows(m);
  return e.reduced_basis();
}

FMatrix kernel_basis(const FMatrix& m) {
  const auto& field = m.field();
  const FMatrix r = rref(m);
  std::vector<std::size_t> pivot_of_row;
  std::vector<char> is_pivot(m.cols(), 0);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    const auto entries = r.row_entries(i);
    pivot_of_row.push_back(entries.front().col);
    is_pivot[entries.front().col] = 1;
  }
  std::vector<std::vector<Entry>> rrows(r.rows());
  for (std::size_t i = 0; i < r.rows(); ++i) rrows[i] = r.row_entries(i);

  FMatrix out(field, m.cols() - r.rows(), m.cols());
  std::size_t k = 0;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    out.set(k, f, 1);
    for (std::size_t i = 0; i < rrows.size(); ++i) {
      for (const auto& e : rrows[i]) {
        if (e.col == f) out.set(k, pivot_of_row[i], field.neg(e.value));
        if (e.col >= f) break;
      }
    }
    ++k;
  }
  return out;
}

bool in_rowspace(const FMatrix& m, const FVector& v) {
  if (v.size() != m.cols()) throw DimensionMismatch("in_rowspace: length mismatch");
  Echelon e(m.field(), m.cols());
  e.insert_rows(m);
  return e.contains(v);
}

std::optional<FVector> solve(const FMatrix& a, const FVector& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("solve: rhs length must equal row count");
  const auto& field = a.field();
  const std::size_t n = a.cols();
  Echelon e(field, n + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    FVector row(field, n + 1);
    for (const auto& en : a.row_entries(r)) row[en.col] = en.value;
    row[n] = b[r];
    e.insert(row);
  }
  for (std::size_t pc : e.pivots()) {
    if (pc == n) return std::nullopt;
  }
  const FMatrix r = e.reduced_basis();
  FVector y(field, n);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    const auto entries = r.row_entries(i);
    if (entries.back().col == n) y[entries.front().col] = entries.back().value;
  }
  return y;
}

std::optional<FVector> inconsistency_certificate(const FMatrix& a, const FVector& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("certificate: rhs length must equal row count");
  const auto& field = a.field();
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  Echelon e(field, n + 1 + m);
  for (std::size_t r = 0; r < m; ++r) {
    FVector row(field, n + 1 + m);
    for (const auto& en : a.row_entries(r)) row[en.col] = en.value;
    row[n] = b[r];
    row[n + 1 + r] = 1;
    e.insert(row);
  }
  if (std::find(e.pivots().begin(), e.pivots().end(), n) == e.pivots().end()) return std::nullopt;
  const FMatrix red = e.reduced_basis();
  for (std::size_t i = 0; i < red.rows(); ++i) {
    const auto entries = red.row_entries(i);
    if (entries.front().col != n) continue;
    FVector lambda(field, m);
    for (const auto& en : entries) {
      if (en.col > n) lambda[en.col - n - 1] = en.value;
    }
    return lambda;
  }
  return std::nullopt;
}

LinearCode LinearCode::from_generators(const FMatrix& gens) { return LinearCode(rref(gens)); }

LinearCode LinearCode::from_parity_check(const FMatrix& h) { return LinearCode(rref(kernel_basis(h))); }

LinearCode LinearCode::zero(PrimeField field, std::size_t n) { return LinearCode(FMatrix(field, 0, n)); }

LinearCode LinearCode::full(PrimeField field, std::size_t n) { return LinearCode(FMatrix::identity(field, n)); }

bool LinearCode::contains(const FVector& v) const { return in_rowspace(basis_, v); }

LinearCode LinearCode::dual() const { return from_parity_check(basis_); }

LinearCode LinearCode::intersect(const LinearCode& other) const {
  if (other.length() != length()) throw DimensionMismatch("intersect: length mismatch");
  // (A ∩ B) = (A^⊥ + B^⊥)^⊥
  const FMatrix ha = parity_check();
  const FMatrix hb = other.parity_check();
  FMatrix stacked(field(), 0, length());
  for (std::size_t r = 0; r < ha.rows(); ++r) stacked.append_row(ha.row(r));
  for (std::size_t r = 0; r < hb.rows(); ++r) stacked.append_row(hb.row(r));
  return from_parity_check(stacked);
}

bool operator==(const LinearCode& a, const LinearCode& b) { return a.basis_ == b.basis_; }

std::size_t coset_min_weight(const FVector& v, const FMatrix& basis) {
  if (v.size() != basis.cols()) throw DimensionMismatch("coset_min_weight: length mismatch");
  const auto& field = basis.field();
  const std::size_t n = basis.cols();
  const std::size_t k = basis.rows();
  require_enumerable(field.p(), k, "coset_min_weight");

  if (field.p() == 2 && n <= 64) {
    auto to_mask = [&](const FVector& x) {
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i]) mask |= std::uint64_t{1} << i;
      }
      return mask;
    };
    std::vector<std::uint64_t> rows(k);
    for (std::size_t i = 0; i < k; ++i) rows[i] = to_mask(basis.row(i));
    std::uint64_t cur = to_mask(v);
    std::size_t best = static_cast<std::size_t>(std::popcount(cur));
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t t = 1; t < total && best > 0; ++t) {
      cur ^= rows[static_cast<std::size_t>(std::countr_zero(t))];
      best = std::min(best, static_cast<std::size_t>(std::popcount(cur)));
    }
    return best;
  }

  FVector cur = v;
  std::size_t weight = cur.weight();
  std::size_t best = weight;
  std::vector<std::vector<Entry>> rows(k);
  for (std::size_t i = 0; i < k; ++i) rows[i] = basis.row_entries(i);
  const std::uint64_t total = checked_pow(field.p(), k);
  for (std::uint64_t t = 1; t < total && best > 0; ++t) {
    std::uint64_t u = t;
    std::size_t i = 0;
    while (u % field.p() == 0) {
      u /= field.p();
      ++i;
    }
    for (const auto& e : rows[i]) {
      const Elem before = cur[e.col];
      const Elem after = field.add(before, e.value);
      cur[e.col] = after;
      weight = weight - (before != 0) + (after != 0);
    }
    best = std::min(best, weight);
  }
  return best;
}

std::size_t coset_min_weight(const FVector& v, const LinearCode& c) { return coset_min_weight(v, c.basis()); }

std::size_t min_distance(const LinearCode& c) {
  if (c.dim() == 0) return kInfinite;
  const auto& field = c.field();
  const FMatrix& basis = c.basis();
  // Every nonzero codeword is a scalar multiple of one whose leading coefficient
  // (in the last basis row used) is 1, so enumerate v_j + span(v_0..v_{j-1}).
  std::size_t best = kInfinite;
  require_enumerable(field.p(), c.dim(), "min_distance");
  for (std::size_t j = 0; j < c.dim(); ++j) {
    FMatrix prefix(field, j, c.length());
    for (std::size_t r = 0; r < j; ++r) {
      for (const auto& e : basis.row_entries(r)) prefix.set(r, e.col, e.value);
    }
    best = std::min(best, coset_min_weight(basis.row(j), prefix));
    if (best == 1) break;
  }
  return best;
}

}  // namespace qtanner::gf
