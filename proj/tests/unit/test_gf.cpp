#include "doctest.h"

#include <random>
#include <set>

#include "gf/io.hpp"
#include "gf/linalg.hpp"
#include "util/rng.hpp"

using namespace qtanner;
using namespace qtanner::gf;

namespace {

FMatrix random_matrix(PrimeField f, std::size_t r, std::size_t c, Rng& rng, double density = 0.5) {
  FMatrix m(f, r, c);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (u(rng) < density) m.set(i, j, 1 + static_cast<Elem>(uniform_below(rng, f.p() - 1)));
  return m;
}

// All vectors of F_p^n, lexicographic.
std::vector<FVector> all_vectors(PrimeField f, std::size_t n) {
  std::vector<FVector> out;
  std::uint64_t total = checked_pow(f.p(), n);
  for (std::uint64_t t = 0; t < total; ++t) {
    FVector v(f, n);
    std::uint64_t u = t;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = static_cast<Elem>(u % f.p());
      u /= f.p();
    }
    out.push_back(v);
  }
  return out;
}

// Span by direct coefficient enumeration.
std::vector<FVector> span_of(const FMatrix& m) {
  std::vector<FVector> out;
  for (const auto& coeffs : all_vectors(m.field(), m.rows())) {
    FVector v(m.field(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) v.axpy(coeffs[i], m.row(i));
    out.push_back(v);
  }
  return out;
}

}  // namespace

TEST_CASE("field arithmetic") {
  PrimeField f(7);
  CHECK(f.mul(3, 5) == 1);
  CHECK(f.inv(3) == 5);
  CHECK(f.reduce(-1) == 6);
  CHECK_THROWS_AS(f.inv(0), DomainError);
  CHECK_THROWS_AS(PrimeField(9), InvalidArgument);
  CHECK_THROWS_AS(PrimeField(65537), InvalidArgument);
  for (Elem a = 1; a < 7; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
}

TEST_CASE("rank examples") {
  PrimeField f2(2), f3(3);
  CHECK(rank(FMatrix(f2, 3, 3)) == 0);
  CHECK(rank(FMatrix::identity(f3, 4)) == 4);
  auto m = FMatrix::from_rows(f2, 3, std::vector<std::vector<Elem>>{{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  CHECK(rank(m) == 2);
}

TEST_CASE("kernel examples") {
  PrimeField f2(2), f3(3);
  CHECK(kernel_basis(FMatrix::identity(f2, 3)).rows() == 0);
  CHECK(kernel_basis(FMatrix(f3, 2, 4)).rows() == 4);
  auto h = FMatrix::from_rows(f2, 3, std::vector<std::vector<Elem>>{{1, 1, 1}});
  auto k = kernel_basis(h);
  CHECK(k.rows() == 2);
  std::set<std::vector<Elem>> evens, spanned;
  for (const auto& v : all_vectors(f2, 3))
    if (v.weight() % 2 == 0) evens.insert(v.data());
  for (const auto& v : span_of(k)) spanned.insert(v.data());
  CHECK(evens == spanned);
}

TEST_CASE("in_rowspace examples") {
  PrimeField f2(2), f3(3);
  CHECK(in_rowspace(FMatrix::identity(f3, 3), FVector(f3, {2, 1, 0})));
  auto m = FMatrix::from_rows(f3, 3, std::vector<std::vector<Elem>>{{1, 1, 0}});
  CHECK(in_rowspace(m, FVector(f3, {2, 2, 0})));
  auto even = FMatrix::from_rows(f2, 3, std::vector<std::vector<Elem>>{{1, 1, 0}, {0, 1, 1}});
  CHECK_FALSE(in_rowspace(even, FVector::ones(f2, 3)));
  CHECK_THROWS_AS(in_rowspace(even, FVector(f2, 2)), DimensionMismatch);
}

TEST_CASE("solve examples") {
  PrimeField f3(3);
  FVector b(f3, {1, 2, 0});
  CHECK(*solve(FMatrix::identity(f3, 3), b) == b);
  CHECK_FALSE(solve(FMatrix(f3, 2, 2), FVector(f3, {1, 0})).has_value());
  auto a = FMatrix::from_rows(f3, 2, std::vector<std::vector<Elem>>{{1, 1}, {1, 2}});
  auto y = solve(a, FVector(f3, {0, 1}));
  REQUIRE(y.has_value());
  CHECK(*y == FVector(f3, {2, 1}));
}

TEST_CASE("solve and certificate agree on random systems") {
  Rng rng(11);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    PrimeField f(p);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t r = 1 + uniform_below(rng, 6), c = 1 + uniform_below(rng, 6);
      auto a = random_matrix(f, r, c, rng, 0.4);
      FVector b(f, r);
      for (std::size_t i = 0; i < r; ++i) b[i] = static_cast<Elem>(uniform_below(rng, p));
      auto y = solve(a, b);
      auto cert = inconsistency_certificate(a, b);
      CHECK(y.has_value() != cert.has_value());
      if (y) CHECK(a.multiply(*y) == b);
      if (cert) {
        CHECK(a.transpose().multiply(*cert).is_zero());
        CHECK(cert->dot(b) != 0);
      }
    }
  }
}

TEST_CASE("rank of transpose and kernel/rowspace duality") {
  Rng rng(5);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    PrimeField f(p);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t r = 1 + uniform_below(rng, 8), c = 1 + uniform_below(rng, 8);
      auto m = random_matrix(f, r, c, rng);
      CHECK(rank(m) == rank(m.transpose()));
      auto k = kernel_basis(m);
      CHECK(rank(k) == k.rows());
      CHECK(k.rows() + rank(m) == c);
      CHECK(m.multiply_transpose(k).is_zero());
      // any rowspace vector is orthogonal to the kernel
      FVector v(f, c);
      for (std::size_t i = 0; i < r; ++i) v.axpy(static_cast<Elem>(uniform_below(rng, p)), m.row(i));
      CHECK(in_rowspace(m, v));
      for (std::size_t i = 0; i < k.rows(); ++i) CHECK(v.dot(k.row(i)) == 0);
    }
  }
}

TEST_CASE("sparse and dense storage agree") {
  Rng rng(3);
  PrimeField f(5);
  auto m = random_matrix(f, 7, 9, rng, 0.3);
  auto s = m.with_storage(Storage::sparse);
  CHECK_FALSE(s.is_dense());
  CHECK(s == m);
  CHECK(s.dense_rows() == m.dense_rows());
  CHECK(s.column_weights() == m.column_weights());
  CHECK(rank(s) == rank(m));
  CHECK(s.transpose() == m.transpose());
  CHECK(FMatrix(f, 2000, 1000).is_dense() == false);
}

TEST_CASE("coset_min_weight examples") {
  PrimeField f2(2);
  auto rep = LinearCode::from_generators(FMatrix::from_rows(f2, 3, std::vector<std::vector<Elem>>{{1, 1, 1}}));
  CHECK(coset_min_weight(FVector::ones(f2, 3), rep) == 0);
  CHECK(coset_min_weight(FVector(f2, {1, 1, 0}), rep) == 1);
  auto z = LinearCode::zero(f2, 5);
  CHECK(coset_min_weight(FVector(f2, {1, 0, 1, 1, 0}), z) == 3);
}

TEST_CASE("coset_min_weight properties over F_3") {
  Rng rng(17);
  PrimeField f3(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto code = LinearCode::from_generators(random_matrix(f3, 2, 5, rng));
    FVector v(f3, 5);
    for (std::size_t i = 0; i < 5; ++i) v[i] = static_cast<Elem>(uniform_below(rng, 3));
    std::size_t oracle = 99;
    for (const auto& c : span_of(code.basis())) oracle = std::min(oracle, (v + c).weight());
    CHECK(coset_min_weight(v, code) == oracle);
    CHECK((oracle == 0) == code.contains(v));
    if (code.dim() > 0) CHECK(coset_min_weight(v + code.basis().row(0).scaled(2), code) == oracle);
  }
}

TEST_CASE("budget is enforced") {
  PrimeField f2(2);
  const auto saved = enumeration_budget();
  set_enumeration_budget(8);
  CHECK_THROWS_AS(min_distance(LinearCode::full(f2, 4)), BudgetExceeded);
  CHECK(min_distance(LinearCode::full(f2, 3)) == 1);
  set_enumeration_budget(saved);
}

TEST_CASE("min_distance examples") {
  PrimeField f2(2);
  auto rep = LinearCode::from_generators(FMatrix::from_rows(f2, 5, std::vector<FVector>{FVector::ones(f2, 5)}));
  CHECK(min_distance(rep) == 5);
  CHECK(min_distance(LinearCode::full(f2, 3)) == 1);
  auto even = LinearCode::from_parity_check(FMatrix::from_rows(f2, 4, std::vector<FVector>{FVector::ones(f2, 4)}));
  CHECK(even.dim() == 3);
  CHECK(min_distance(even) == 2);
  CHECK(min_distance(LinearCode::zero(f2, 4)) == kInfinite);
}

TEST_CASE("min_distance against exhaustive oracle on small binary codes") {
  PrimeField f2(2);
  Rng rng(23);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 6);
    const std::size_t k = 1 + uniform_below(rng, std::min<std::size_t>(3, n));
    auto code = LinearCode::from_generators(random_matrix(f2, k, n, rng));
    std::size_t oracle = kInfinite;
    for (const auto& c : span_of(code.basis()))
      if (!c.is_zero()) oracle = std::min(oracle, c.weight());
    CHECK(min_distance(code) == oracle);
  }
}

TEST_CASE("dual and intersection") {
  Rng rng(29);
  PrimeField f3(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = LinearCode::from_generators(random_matrix(f3, 2, 5, rng));
    auto b = LinearCode::from_generators(random_matrix(f3, 3, 5, rng));
    CHECK(a.dual().dim() + a.dim() == 5);
    CHECK(a.dual().dual() == a);
    auto ab = a.intersect(b);
    std::size_t count = 0;
    for (const auto& v : span_of(a.basis()))
      if (b.contains(v)) ++count;
    CHECK(count == checked_pow(3, ab.dim()));
  }
}

TEST_CASE("alist and json round trip") {
  Rng rng(31);
  for (std::uint32_t p : {2u, 3u, 7u}) {
    PrimeField f(p);
    auto m = random_matrix(f, 6, 9, rng, 0.3);
    auto text = to_alist(m);
    CHECK(from_alist(text, p) == m);
    CHECK(to_alist(from_alist(text, p)) == text);
    auto j = to_json(m);
    CHECK(matrix_from_json(j) == m);
    CHECK(to_json(matrix_from_json(j)).dump() == j.dump());
  }
  CHECK_THROWS_AS(from_alist("2 2\n1 1\n1 1\n1 1\n1\n2\n1\n", 2), IoError);
}
