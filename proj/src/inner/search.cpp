#include "inner/search.hpp"

#include <cmath>
#include <algorithm>
#include <bit>
#include <set>

#include "gf/io.hpp"
#include "inner/entropy.hpp"
#include "util/rng.hpp"

namespace qtanner::inner {

using gf::FMatrix;
using gf::FVector;
using gf::LinearCode;

gf::LinearCode sample_planted_code(std::uint32_t p, std::size_t n, std::size_t k, std::uint64_t seed) {
  const gf::PrimeField f(p);
  if (n == 0 || k < 1 || k > n) {
    throw InvalidDimension("planted code dimension must satisfy 1 <= k <= n (n=" + std::to_string(n) +
                           ", k=" + std::to_string(k) + ")");
  }
  // A k-dim code containing 1 is span{1} + U for a unique (k-1)-dim U inside
  // W = {x : x_0 = 0}, so a uniform U gives a uniform code.
  Rng rng(derive_seed(seed, "planted-code"));
  gf::Echelon u(f, n);
  FMatrix gens(f, 0, n);
  gens.append_row(FVector::ones(f, n));
  while (u.rank() < k - 1) {
    FVector v(f, n);
    for (std::size_t i = 1; i < n; ++i) v[i] = static_cast<gf::Elem>(uniform_below(rng, p));
    if (u.insert(v)) gens.append_row(v);
  }
  return LinearCode::from_generators(gens);
}

std::string to_string(Certification c) {
  switch (c) {
    case Certification::vacuous: return "vacuous";
    case Certification::exact: return "exact";
    case Certification::screened: return "screened";
    case Certification::none: return "none";
  }
  return "none";
}

Certification certification_from_string(const std::string& s) {
  if (s == "vacuous") return Certification::vacuous;
  if (s == "exact") return Certification::exact;
  if (s == "screened") return Certification::screened;
  if (s == "none") return Certification::none;
  throw IoError("unknown certification level '" + s + "'");
}

bool InnerCodePair::planted() const {
  const auto& f = a.field();
  const FVector one = FVector::ones(f, delta());
  if (!a.contains(one)) return false;
  for (std::size_t r = 0; r < b.dim(); ++r) {
    if (b.basis().row(r).dot(one) != 0) return false;
  }
  return true;
}

namespace {

std::size_t distance_or_length(const LinearCode& c) {
  const std::size_t d = gf::min_distance(c);
  return d == gf::kInfinite ? c.length() + 1 : d;
}

}  // namespace

InnerCodePair search_inner_pair(std::uint32_t p, std::size_t delta, std::size_t ka, std::size_t kb, double rho_target,
                                std::size_t budget, std::uint64_t seed, const SearchOptions& opts) {
  if (delta < 2 || ka < 1 || ka > delta - 1 || kb < 1 || kb > delta - 1) {
    throw InvalidDimension("inner code dimensions must lie in [1, delta-1]");
  }
  if (rho_target < 0) throw InvalidArgument("rho target must be non-negative");
  for (std::size_t t = 0; t < budget; ++t) {
    const std::uint64_t s = derive_seed(seed, t);
    InnerCodePair pair;
    pair.a = sample_planted_code(p, delta, ka, derive_seed(s, "A"));
    pair.b = sample_planted_code(p, delta, delta - kb, derive_seed(s, "B-dual")).dual();
    pair.rho_target = rho_target;
    pair.candidates_tried = t + 1;
    pair.seed = seed;
    if (opts.property_star_filter) {
      if (!property_star_check(pair.a).holds || !property_star_check(pair.b).holds) continue;
    }
    if (rho_target == 0) {
      pair.certification = Certification::vacuous;
      return pair;
    }
    const LinearCode ad = pair.a.dual(), bd = pair.b.dual();
    try {
      const auto primal = product_expansion_exact(pair.a, pair.b);
      const auto dual = product_expansion_exact(ad, bd);
      if (primal.rho + 1e-12 < rho_target || dual.rho + 1e-12 < rho_target) continue;
      pair.rho_primal = primal.rho;
      pair.rho_dual = dual.rho;
      pair.certification = Certification::exact;
      return pair;
    } catch (const BudgetExceeded&) {
    }
    // Distances bound rho from above (rho n <= d), so screen on them first.
    const double need = rho_target * static_cast<double>(delta);
    bool ok = true;
    for (const LinearCode* c : std::initializer_list<const LinearCode*>{&pair.a, &pair.b, &ad, &bd}) {
      if (static_cast<double>(distance_or_length(*c)) + 1e-12 < need) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (product_expansion_falsify(pair.a, pair.b, rho_target, opts.falsify_trials, derive_seed(s, "falsify-primal")) ||
        product_expansion_falsify(ad, bd, rho_target, opts.falsify_trials, derive_seed(s, "falsify-dual"))) {
      continue;
    }
    pair.certification = Certification::screened;
    pair.note = "distance-screened, no violation in " + std::to_string(opts.falsify_trials) + " trials per pair";
    return pair;
  }
  throw SearchExhausted("no planted inner pair met rho >= " + std::to_string(rho_target) + " within " +
                        std::to_string(budget) + " candidates");
}

StarResult property_star_check(const LinearCode& c, std::optional<double> alpha) {
  const auto& f = c.field();
  const std::size_t n = c.length();
  if (f.p() != 2 || n > 10) throw PreconditionViolated("property (*) check needs p = 2 and n <= 10");
  const std::size_t r = n - c.dim();
  StarResult res;
  res.alpha = alpha ? *alpha : (r == 0 ? 0.0 : q_entropy_inv(static_cast<double>(r) / (8.0 * static_cast<double>(n)), 2));
  res.max_sparse_weight = static_cast<std::size_t>(std::floor(res.alpha * static_cast<double>(n) + 1e-12));
  if (r == 0) return res;

  auto mask_of = [&](const FVector& v) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i]) m |= 1u << i;
    }
    return m;
  };
  std::vector<std::uint32_t> sparse;
  for (std::uint32_t v = 1; v < (1u << n); ++v) {
    if (static_cast<std::size_t>(std::popcount(v)) <= res.max_sparse_weight) sparse.push_back(v);
  }
  std::vector<std::uint32_t> code_rows;
  for (std::size_t i = 0; i < c.dim(); ++i) code_rows.push_back(mask_of(c.basis().row(i)));

  // Rank over F_2 of a list of masks.
  auto rank_of = [](std::vector<std::uint32_t> rows) {
    std::size_t rk = 0;
    for (std::size_t bit = 0; bit < 32 && rk < rows.size(); ++bit) {
      std::size_t piv = rk;
      while (piv < rows.size() && !((rows[piv] >> bit) & 1)) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[rk], rows[piv]);
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (j != rk && ((rows[j] >> bit) & 1)) rows[j] ^= rows[rk];
      }
      ++rk;
    }
    return rk;
  };
  // Canonical key of a span: its sorted reduced basis.
  auto canonical = [](std::vector<std::uint32_t> rows) {
    std::vector<std::uint32_t> out;
    for (int bit = 31; bit >= 0; --bit) {
      auto it = std::find_if(rows.begin(), rows.end(), [bit](std::uint32_t x) { return (x >> bit) & 1; });
      if (it == rows.end()) continue;
      const std::uint32_t pr = *it;
      rows.erase(it);
      for (auto& x : rows) {
        if ((x >> bit) & 1) x ^= pr;
      }
      for (auto& x : out) {
        if ((x >> bit) & 1) x ^= pr;
      }
      out.push_back(pr);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  std::set<std::vector<std::uint32_t>> seen;
  std::vector<std::vector<std::uint32_t>> stack{{}};
  while (!stack.empty()) {
    auto basis = std::move(stack.back());
    stack.pop_back();
    if (basis.size() >= r) continue;
    for (std::uint32_t v : sparse) {
      std::vector<std::uint32_t> next = basis;
      next.push_back(v);
      if (rank_of(next) != next.size()) continue;
      auto key = canonical(next);
      if (!seen.insert(key).second) continue;
      if (++res.subspaces_checked > gf::enumeration_budget()) {
        throw BudgetExceeded("property (*) check: too many sparse subspaces");
      }
      const std::size_t m = key.size();
      std::vector<std::uint32_t> both = code_rows;
      both.insert(both.end(), key.begin(), key.end());
      const std::size_t inter = c.dim() + m - rank_of(both);
      if (2 * inter >= m) {
        res.holds = false;
        FMatrix w(f, m, n);
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            if ((key[i] >> j) & 1) w.set(i, j, 1);
          }
        }
        res.witness = std::move(w);
        return res;
      }
      stack.push_back(std::move(key));
    }
  }
  return res;
}

nlohmann::json to_json(const InnerCodePair& pair) {
  nlohmann::json j{{"p", pair.a.field().p()},
                   {"delta", pair.delta()},
                   {"C_A", gf::to_json(pair.a.basis())},
                   {"C_B", gf::to_json(pair.b.basis())},
                   {"certification", to_string(pair.certification)},
                   {"rho_target", pair.rho_target},
                   {"candidates_tried", pair.candidates_tried},
                   {"seed", pair.seed},
                   {"planted", pair.planted()},
                   {"note", pair.note}};
  j["rho_primal"] = pair.rho_primal ? nlohmann::json(*pair.rho_primal) : nlohmann::json(nullptr);
  j["rho_dual"] = pair.rho_dual ? nlohmann::json(*pair.rho_dual) : nlohmann::json(nullptr);
  return j;
}

InnerCodePair pair_from_json(const nlohmann::json& j) {
  try {
    InnerCodePair pair;
    pair.a = LinearCode::from_generators(gf::matrix_from_json(j.at("C_A")));
    pair.b = LinearCode::from_generators(gf::matrix_from_json(j.at("C_B")));
    if (!(pair.a.field() == pair.b.field()) || pair.a.length() != pair.b.length()) {
      throw DimensionMismatch("inner pair json: C_A and C_B disagree on field or length");
    }
    pair.certification = certification_from_string(j.value("certification", std::string("none")));
    pair.rho_target = j.value("rho_target", 0.0);
    pair.candidates_tried = j.value("candidates_tried", std::size_t{0});
    pair.seed = j.value("seed", std::uint64_t{0});
    pair.note = j.value("note", std::string());
    if (j.contains("rho_primal") && !j["rho_primal"].is_null()) pair.rho_primal = j["rho_primal"].get<double>();
    if (j.contains("rho_dual") && !j["rho_dual"].is_null()) pair.rho_dual = j["rho_dual"].get<double>();
    return pair;
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("inner pair json: ") + ex.what());
  }
}

}  // namespace qtanner::inner
