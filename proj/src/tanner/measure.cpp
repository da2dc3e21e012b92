#include "tanner/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gf/io.hpp"
#include "util/rng.hpp"

namespace qtanner::tanner {

using gf::FMatrix;
using gf::FVector;

namespace {

// Rows completing a basis of rowspace(perp) to one of ker(check): logical representatives.
FMatrix logical_complement(const FMatrix& kernel, const gf::Echelon& perp) {
  gf::Echelon e = perp;
  FMatrix out(kernel.field(), 0, kernel.cols());
  for (std::size_t r = 0; r < kernel.rows(); ++r) {
    FVector v = kernel.row(r);
    if (e.insert(v)) out.append_row(v);
  }
  return out;
}

SideDistance side_distance(const FMatrix& check, const FMatrix& perp_gens, std::size_t trials, std::uint64_t seed,
                           bool& exact) {
  const auto& f = check.field();
  const std::size_t n = check.cols();
  const FMatrix kernel = gf::kernel_basis(check);
  gf::Echelon perp(f, n);
  perp.insert_rows(perp_gens);
  const FMatrix logicals = logical_complement(kernel, perp);
  SideDistance res;
  if (logicals.rows() == 0) return res;

  if (gf::checked_pow(f.p(), kernel.rows()) <= gf::enumeration_budget()) {
    // min over nonzero logical l of the weight of the coset l + C^perp
    const FMatrix perp_basis = perp.reduced_basis();
    gf::for_each_in_span(logicals, [&](const FVector& l) {
      if (l.is_zero()) return true;
      const std::size_t w = gf::coset_min_weight(l, perp_basis);
      if (w < res.weight) {
        res.weight = w;
        res.witness = l;
      }
      return true;
    });
    // recover a minimum-weight representative for the witness
    if (res.witness) {
      FVector best = *res.witness;
      gf::for_each_in_span(perp_basis, [&](const FVector& s) {
        FVector y = *res.witness + s;
        if (y.weight() == res.weight) {
          best = y;
          return false;
        }
        return true;
      });
      res.witness = best;
    }
    return res;
  }

  exact = false;
  Rng rng(derive_seed(seed, "isd"));
  std::vector<std::size_t> perm(n), inv(n);
  auto consider = [&](const FVector& y) {
    if (y.is_zero() || y.weight() >= res.weight || perp.contains(y)) return;
    res.weight = y.weight();
    res.witness = y;
  };
  for (std::size_t t = 0; t < trials; ++t) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i) inv[perm[i]] = i;
    FMatrix permuted(f, kernel.rows(), n);
    for (std::size_t r = 0; r < kernel.rows(); ++r) {
      for (const auto& e : kernel.row_entries(r)) permuted.set(r, perm[e.col], e.value);
    }
    const FMatrix sys = gf::rref(permuted);
    std::vector<FVector> rows;
    for (std::size_t r = 0; r < sys.rows(); ++r) {
      FVector y(f, n);
      for (const auto& e : sys.row_entries(r)) y[inv[e.col]] = e.value;
      rows.push_back(std::move(y));
    }
    for (const auto& y : rows) consider(y);
    const std::size_t pairs = std::min<std::size_t>(rows.size(), 24);
    for (std::size_t a = 0; a < pairs; ++a) {
      for (std::size_t b = a + 1; b < pairs; ++b) consider(rows[a] + rows[b]);
    }
  }
  return res;
}

std::size_t greedy_coset_weight(FVector y, const std::vector<FVector>& rows) {
  const auto& f = y.field();
  bool improved = true;
  std::size_t w = y.weight();
  while (improved && w > 0) {
    improved = false;
    for (const auto& h : rows) {
      for (gf::Elem c = 1; c < f.p(); ++c) {
        FVector z = y;
        z.axpy(c, h);
        const std::size_t wz = z.weight();
        if (wz < w) {
          y = std::move(z);
          w = wz;
          improved = true;
        }
      }
    }
  }
  return w;
}

// Calls f(y) on every vector of weight 1..max_weight.
template <class F>
void for_each_light_vector(const gf::PrimeField& field, std::size_t n, std::size_t max_weight, F&& f) {
  FVector y(field, n);
  std::vector<std::size_t> support;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (!support.empty()) f(static_cast<const FVector&>(y));
    if (support.size() == max_weight) return;
    for (std::size_t i = start; i < n; ++i) {
      support.push_back(i);
      for (gf::Elem v = 1; v < field.p(); ++v) {
        y[i] = v;
        self(self, i + 1);
      }
      y[i] = 0;
      support.pop_back();
    }
  };
  rec(rec, 0);
}

long double light_vector_count(std::size_t n, std::size_t w, std::uint32_t p) {
  long double total = 0, binom = 1, pw = 1;
  for (std::size_t k = 1; k <= w; ++k) {
    binom = binom * static_cast<long double>(n - k + 1) / static_cast<long double>(k);
    pw *= static_cast<long double>(p - 1);
    total += binom * pw;
  }
  return total;
}

SsexpCurve ssexp_side(const std::string& side, const FMatrix& h, const FMatrix& perp_gens,
                      const std::vector<double>& grid, std::size_t trials, std::uint64_t seed) {
  const auto& f = h.field();
  const std::size_t n = h.cols();
  const double m = static_cast<double>(std::max<std::size_t>(h.rows(), 1));
  gf::Echelon perp(f, n);
  perp.insert_rows(perp_gens);
  const FMatrix perp_basis = perp.reduced_basis();
  const bool exact_coset = gf::checked_pow(f.p(), perp_basis.rows()) <= gf::enumeration_budget();
  std::vector<FVector> perp_rows;
  for (std::size_t r = 0; r < perp_gens.rows(); ++r) perp_rows.push_back(perp_gens.row(r));

  SsexpCurve curve;
  curve.side = side;
  Rng rng(derive_seed(seed, side));
  for (double eps : grid) {
    SsexpPoint pt;
    pt.eps = eps;
    pt.max_weight = static_cast<std::size_t>(std::floor(eps * static_cast<double>(n) + 1e-12));
    pt.max_weight = std::min(pt.max_weight, n);
    pt.exact_coset = exact_coset;
    pt.c2 = std::numeric_limits<double>::infinity();
    auto record = [&](const FVector& y) {
      ++pt.samples;
      const std::size_t cw = exact_coset ? gf::coset_min_weight(y, perp_basis) : greedy_coset_weight(y, perp_rows);
      if (cw == 0) {
        ++pt.excluded;
        return;
      }
      const double syn = static_cast<double>(h.multiply(y).weight()) / m;
      const double cos = static_cast<double>(cw) / static_cast<double>(n);
      if (syn / cos < pt.c2) {
        pt.c2 = syn / cos;
        pt.worst_syndrome = syn;
        pt.worst_coset = cos;
      }
    };
    if (pt.max_weight == 0) {
      curve.points.push_back(pt);
      continue;
    }
    if (light_vector_count(n, pt.max_weight, f.p()) <= static_cast<long double>(trials)) {
      pt.exhaustive = true;
      for_each_light_vector(f, n, pt.max_weight, record);
    } else {
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t w = 1 + uniform_below(rng, pt.max_weight);
        std::shuffle(idx.begin(), idx.end(), rng);
        FVector y(f, n);
        for (std::size_t k = 0; k < w; ++k) y[idx[k]] = static_cast<gf::Elem>(1 + uniform_below(rng, f.p() - 1));
        record(y);
      }
    }
    curve.points.push_back(pt);
  }
  return curve;
}

nlohmann::json side_json(const SideDistance& s) {
  nlohmann::json j;
  j["weight"] = s.weight == gf::kInfinite ? nlohmann::json("inf") : nlohmann::json(s.weight);
  j["witness"] = s.witness ? gf::to_json(*s.witness) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

DistanceReport estimate_distance(const CssCode& code, std::size_t trials, std::uint64_t seed) {
  DistanceReport r;
  r.trials = trials;
  bool exact = true;
  r.z = side_distance(code.hz, code.hx, trials, derive_seed(seed, "Z"), exact);
  r.x = side_distance(code.hx, code.hz, trials, derive_seed(seed, "X"), exact);
  r.exact = exact;
  return r;
}

std::pair<SsexpCurve, SsexpCurve> estimate_ssexp(const CssCode& code, const std::vector<double>& eps_grid,
                                                 std::size_t trials, std::uint64_t seed) {
  return {ssexp_side("boundary", code.hz, code.hx, eps_grid, trials, seed),
          ssexp_side("coboundary", code.hx, code.hz, eps_grid, trials, seed)};
}

nlohmann::json to_json(const DistanceReport& r) {
  nlohmann::json j{{"mode", r.exact ? "exact" : "upper_bound"},
                   {"trials", r.trials},
                   {"Z", side_json(r.z)},
                   {"X", side_json(r.x)}};
  j["d"] = r.d() == gf::kInfinite ? nlohmann::json("inf") : nlohmann::json(r.d());
  return j;
}

nlohmann::json to_json(const SsexpCurve& c) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : c.points) {
    pts.push_back({{"eps", p.eps},
                   {"max_weight", p.max_weight},
                   {"samples", p.samples},
                   {"excluded", p.excluded},
                   {"exhaustive", p.exhaustive},
                   {"exact_coset", p.exact_coset},
                   {"c2", std::isinf(p.c2) ? nlohmann::json("inf") : nlohmann::json(p.c2)},
                   {"worst_syndrome", p.worst_syndrome},
                   {"worst_coset", p.worst_coset}});
  }
  return {{"side", c.side}, {"points", std::move(pts)}};
}

}  // namespace qtanner::tanner
