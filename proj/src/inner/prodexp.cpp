#include "inner/prodexp.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "util/rng.hpp"

namespace qtanner::inner {

using gf::Elem;
using gf::FVector;
using gf::LinearCode;

Grid tensor(const FVector& a, const FVector& b) {
  const auto& f = a.field();
  Grid g(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) g[i * b.size() + j] = f.mul(a[i], b[j]);
  }
  return g;
}

std::size_t grid_weight(const Grid& x) { return gf::hamming_weight(x); }

std::size_t nonzero_columns(const Grid& x, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i * n + j]) {
        ++count;
        break;
      }
    }
  }
  return count;
}

std::size_t nonzero_rows(const Grid& x, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (x[i * n + j]) {
        ++count;
        break;
      }
    }
  }
  return count;
}

namespace {

struct Bases {
  std::vector<Grid> col_basis;  // C1 (x) F^n
  std::vector<Grid> row_comp;   // F^n (x) C2 elements completing a basis of the sum
  std::vector<Grid> tensor;     // C1 (x) C2
};

Bases make_bases(const LinearCode& c1, const LinearCode& c2) {
  const auto& f = c1.field();
  const std::size_t n = c1.length();
  Bases b;
  gf::Echelon ech(f, n * n);
  for (std::size_t k = 0; k < c1.dim(); ++k) {
    const FVector a = c1.basis().row(k);
    for (std::size_t j = 0; j < n; ++j) {
      Grid g = tensor(a, FVector::unit(f, n, j));
      ech.insert(FVector(f, g));
      b.col_basis.push_back(std::move(g));
    }
  }
  for (std::size_t k = 0; k < c2.dim(); ++k) {
    const FVector r = c2.basis().row(k);
    for (std::size_t i = 0; i < n; ++i) {
      Grid g = tensor(FVector::unit(f, n, i), r);
      if (ech.insert(FVector(f, g))) b.row_comp.push_back(std::move(g));
    }
  }
  for (std::size_t k1 = 0; k1 < c1.dim(); ++k1) {
    for (std::size_t k2 = 0; k2 < c2.dim(); ++k2) b.tensor.push_back(tensor(c1.basis().row(k1), c2.basis().row(k2)));
  }
  return b;
}

void check_pair(const LinearCode& c1, const LinearCode& c2) {
  if (!(c1.field() == c2.field())) throw InvalidArgument("product expansion: codes over different fields");
  if (c1.length() != c2.length()) throw DimensionMismatch("product expansion: codes of different lengths");
}

std::size_t v_p(std::uint64_t t, std::uint32_t p) {
  std::size_t i = 0;
  while (t % p == 0) {
    t /= p;
    ++i;
  }
  return i;
}

// Binary grids with n*n <= 64 as bitmasks.
struct BinarySpace {
  std::size_t n;
  std::vector<std::uint64_t> colmask, rowmask;
  explicit BinarySpace(std::size_t n_) : n(n_), colmask(n_, 0), rowmask(n_, 0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        colmask[j] |= std::uint64_t{1} << (i * n + j);
        rowmask[i] |= std::uint64_t{1} << (i * n + j);
      }
    }
  }
  std::uint64_t pack(const Grid& g) const {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g[k]) m |= std::uint64_t{1} << k;
    }
    return m;
  }
  Grid unpack(std::uint64_t m) const {
    Grid g(n * n);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = (m >> k) & 1;
    return g;
  }
  std::size_t cols(std::uint64_t m) const {
    std::size_t c = 0;
    for (auto cm : colmask) c += (m & cm) != 0;
    return c;
  }
  std::size_t rows(std::uint64_t m) const {
    std::size_t c = 0;
    for (auto rm : rowmask) c += (m & rm) != 0;
    return c;
  }
};

std::size_t binary_cost(const BinarySpace& sp, const std::vector<std::uint64_t>& ys, std::uint64_t c, std::uint64_t r) {
  std::size_t best = sp.cols(c) + sp.rows(r);
  const std::uint64_t total = std::uint64_t{1} << ys.size();
  for (std::uint64_t t = 1; t < total && best > 1; ++t) {
    const std::uint64_t y = ys[static_cast<std::size_t>(std::countr_zero(t))];
    c ^= y;
    r ^= y;
    best = std::min(best, sp.cols(c) + sp.rows(r));
  }
  return best;
}

std::size_t generic_cost(const gf::PrimeField& f, std::size_t n, const std::vector<Grid>& ys, Grid c, Grid r) {
  std::size_t best = nonzero_columns(c, n) + nonzero_rows(r, n);
  const std::uint64_t total = gf::checked_pow(f.p(), ys.size());
  for (std::uint64_t t = 1; t < total && best > 1; ++t) {
    const Grid& y = ys[v_p(t, f.p())];
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (y[k]) {
        c[k] = f.add(c[k], y[k]);
        r[k] = f.sub(r[k], y[k]);
      }
    }
    best = std::min(best, nonzero_columns(c, n) + nonzero_rows(r, n));
  }
  return best;
}

// a/b < c/d for positive denominators
bool ratio_less(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return static_cast<unsigned __int128>(a) * d < static_cast<unsigned __int128>(c) * b;
}

}  // namespace

std::size_t decomposition_cost(const LinearCode& c1, const LinearCode& c2, const Grid& c, const Grid& r) {
  check_pair(c1, c2);
  const std::size_t n = c1.length();
  gf::require_enumerable(c1.field().p(), c1.dim() * c2.dim(), "decomposition_cost");
  std::vector<Grid> ys;
  for (std::size_t k1 = 0; k1 < c1.dim(); ++k1) {
    for (std::size_t k2 = 0; k2 < c2.dim(); ++k2) ys.push_back(tensor(c1.basis().row(k1), c2.basis().row(k2)));
  }
  if (c1.field().p() == 2 && n * n <= 64) {
    BinarySpace sp(n);
    std::vector<std::uint64_t> yb;
    for (const auto& y : ys) yb.push_back(sp.pack(y));
    return binary_cost(sp, yb, sp.pack(c), sp.pack(r));
  }
  return generic_cost(c1.field(), n, ys, c, r);
}

ProductExpansionReport product_expansion_exact(const LinearCode& c1, const LinearCode& c2) {
  check_pair(c1, c2);
  const auto& f = c1.field();
  const std::size_t n = c1.length();
  const std::size_t k1 = c1.dim(), k2 = c2.dim();
  gf::require_enumerable(f.p(), k1 * n, "product_expansion_exact");
  const Bases b = make_bases(c1, c2);
  const std::size_t dim_x = b.col_basis.size() + b.row_comp.size();
  gf::require_enumerable(f.p(), dim_x, "product_expansion_exact");
  gf::require_enumerable(f.p(), k1 * k2, "product_expansion_exact");

  ProductExpansionReport rep;
  rep.n = n;
  if (dim_x == 0) {
    rep.vacuous = true;
    rep.rho = std::numeric_limits<double>::infinity();
    return rep;
  }
  bool have = false;
  const std::uint64_t total = gf::checked_pow(f.p(), dim_x);
  const std::size_t ncol = b.col_basis.size();

  if (f.p() == 2 && n * n <= 64) {
    BinarySpace sp(n);
    std::vector<std::uint64_t> gens, ys;
    for (const auto& g : b.col_basis) gens.push_back(sp.pack(g));
    for (const auto& g : b.row_comp) gens.push_back(sp.pack(g));
    for (const auto& y : b.tensor) ys.push_back(sp.pack(y));
    std::uint64_t c = 0, r = 0, best_x = 0;
    for (std::uint64_t t = 1; t < total; ++t) {
      const std::size_t i = static_cast<std::size_t>(std::countr_zero(t));
      (i < ncol ? c : r) ^= gens[i];
      const std::uint64_t x = c ^ r;
      const std::uint64_t w = static_cast<std::uint64_t>(std::popcount(x));
      if (w == 0) continue;
      // the current decomposition bounds the cost from above, hence the ratio from below
      const std::uint64_t upper = sp.cols(c) + sp.rows(r);
      if (have && !ratio_less(w, n * upper, rep.weight, rep.cost * n)) continue;
      const std::uint64_t cost = binary_cost(sp, ys, c, r);
      ++rep.visited;
      if (!have || ratio_less(w, n * cost, rep.weight, n * rep.cost)) {
        have = true;
        rep.weight = w;
        rep.cost = cost;
        best_x = x;
      }
    }
    rep.witness = sp.unpack(best_x);
  } else {
    Grid c(n * n, 0), r(n * n, 0);
    for (std::uint64_t t = 1; t < total; ++t) {
      const std::size_t i = v_p(t, f.p());
      const Grid& g = i < ncol ? b.col_basis[i] : b.row_comp[i - ncol];
      Grid& tgt = i < ncol ? c : r;
      for (std::size_t k = 0; k < g.size(); ++k) tgt[k] = f.add(tgt[k], g[k]);
      Grid x(n * n);
      for (std::size_t k = 0; k < x.size(); ++k) x[k] = f.add(c[k], r[k]);
      const std::uint64_t w = grid_weight(x);
      if (w == 0) continue;
      const std::uint64_t upper = nonzero_columns(c, n) + nonzero_rows(r, n);
      if (have && !ratio_less(w, n * upper, rep.weight, rep.cost * n)) continue;
      const std::uint64_t cost = generic_cost(f, n, b.tensor, c, r);
      ++rep.visited;
      if (!have || ratio_less(w, n * cost, rep.weight, n * rep.cost)) {
        have = true;
        rep.weight = w;
        rep.cost = cost;
        rep.witness = x;
      }
    }
  }
  rep.rho = static_cast<double>(rep.weight) / static_cast<double>(n * rep.cost);
  return rep;
}

std::size_t line_cover_bound(const Grid& x, std::size_t n) {
  // König: minimum vertex cover = maximum matching in the row/column bipartite graph.
  std::vector<int> match_col(n, -1);
  std::size_t matching = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<char> seen(n, 0);
    auto augment = [&](auto&& self, std::size_t row) -> bool {
      for (std::size_t j = 0; j < n; ++j) {
        if (!x[row * n + j] || seen[j]) continue;
        seen[j] = 1;
        if (match_col[j] < 0 || self(self, static_cast<std::size_t>(match_col[j]))) {
          match_col[j] = static_cast<int>(row);
          return true;
        }
      }
      return false;
    };
    if (augment(augment, i)) ++matching;
  }
  return matching;
}

std::optional<FalsifyWitness> product_expansion_falsify(const LinearCode& c1, const LinearCode& c2, double rho,
                                                        std::size_t trials, std::uint64_t seed) {
  check_pair(c1, c2);
  if (rho <= 0) return std::nullopt;
  const auto& f = c1.field();
  const std::size_t n = c1.length();
  if (c1.dim() == 0 && c2.dim() == 0) return std::nullopt;
  const bool exact_cost = gf::checked_pow(f.p(), c1.dim() * c2.dim()) <= std::min<std::uint64_t>(gf::enumeration_budget(), 1u << 12);
  Rng rng(derive_seed(seed, "falsify"));

  auto random_codeword = [&](const LinearCode& code) {
    FVector v(f, n);
    while (v.is_zero()) {
      for (std::size_t k = 0; k < code.dim(); ++k) {
        v.axpy(static_cast<Elem>(uniform_below(rng, f.p())), code.basis().row(k));
      }
    }
    return v;
  };
  auto pick_count = [&]() -> std::size_t {
    // favour very sparse shapes
    if (uniform_below(rng, 2) == 0) return uniform_below(rng, std::min<std::size_t>(n, 2) + 1);
    return uniform_below(rng, n + 1);
  };

  for (std::size_t t = 0; t < trials; ++t) {
    Grid c(n * n, 0), r(n * n, 0);
    const std::size_t ncols = c1.dim() ? pick_count() : 0;
    const std::size_t nrows = c2.dim() ? pick_count() : 0;
    for (std::size_t s = 0; s < ncols; ++s) {
      const std::size_t j = uniform_below(rng, n);
      const FVector a = random_codeword(c1);
      for (std::size_t i = 0; i < n; ++i) c[i * n + j] = f.add(c[i * n + j], a[i]);
    }
    for (std::size_t s = 0; s < nrows; ++s) {
      const std::size_t i = uniform_below(rng, n);
      const FVector b = random_codeword(c2);
      for (std::size_t j = 0; j < n; ++j) r[i * n + j] = f.add(r[i * n + j], b[j]);
    }
    Grid x(n * n);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = f.add(c[k], r[k]);
    const std::size_t w = grid_weight(x);
    if (w == 0) continue;
    const std::size_t bound = exact_cost ? decomposition_cost(c1, c2, c, r) : line_cover_bound(x, n);
    const double rhs = rho * static_cast<double>(n) * static_cast<double>(bound);
    if (static_cast<double>(w) < rhs - 1e-9 * std::max(1.0, rhs)) {
      return FalsifyWitness{x, w, bound, exact_cost};
    }
  }
  return std::nullopt;
}

nlohmann::json to_json(const ProductExpansionReport& r) {
  nlohmann::json j{{"mode", r.mode}, {"vacuous", r.vacuous}, {"n", r.n}, {"weight", r.weight}, {"cost", r.cost},
                   {"witness", r.witness}};
  if (r.vacuous) {
    j["rho"] = "inf";
  } else {
    j["rho"] = r.rho;
  }
  return j;
}

}  // namespace qtanner::inner
