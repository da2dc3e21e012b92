#include "expander/cayley.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "gf/field.hpp"
#include "gf/linalg.hpp"
#include "util/rng.hpp"

namespace qtanner::expander {

namespace {

constexpr std::size_t kCandidateCap = 2000;
constexpr std::uint64_t kBfsLimit = 1'000'000;

// Letters I+pE12, I+pE21, [[1+p,-p],[p,1-p]] and their inverses, then all
// products of two letters; duplicates and the identity dropped.
std::vector<Coords> word_pool(const CongruenceGroup& g) {
  const std::uint64_t mod = g.modulus(), p = g.p();
  std::vector<Mat2> letters;
  Mat2 x, y, z;
  x.e = {1, p % mod, 0, 1};
  y.e = {1, 0, p % mod, 1};
  z.e = {(1 + p) % mod, mod - p % mod, p % mod, (mod + 1 - p % mod) % mod};
  for (const Mat2& l : {x, y, z}) {
    letters.push_back(l);
    letters.push_back(g.inv(l));
  }
  std::vector<Mat2> words = letters;
  for (const auto& a : letters) {
    for (const auto& b : letters) words.push_back(g.mul(a, b));
  }
  std::vector<Coords> pool;
  const Coords id{};
  for (const auto& w : words) {
    Coords c = g.decode(w);
    if (c != id && std::find(pool.begin(), pool.end(), c) == pool.end()) pool.push_back(c);
  }
  return pool;
}

struct Unit {
  std::size_t s, s_inv;  // pool indices
};

std::vector<Unit> inverse_units(const CongruenceGroup& g, const std::vector<Coords>& pool) {
  std::vector<Unit> units;
  std::vector<char> used(pool.size(), 0);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (used[i]) continue;
    const Coords inv = g.inv(pool[i]);
    auto it = std::find(pool.begin(), pool.end(), inv);
    if (it == pool.end()) continue;
    const std::size_t j = static_cast<std::size_t>(it - pool.begin());
    used[i] = used[j] = 1;
    units.push_back({i, j});
  }
  return units;
}

std::vector<std::vector<std::size_t>> unit_combinations(std::size_t total, std::size_t pick, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> out;
  // count C(total, pick) with saturation
  long double count = 1;
  for (std::size_t i = 0; i < pick; ++i) count = count * static_cast<long double>(total - i) / (i + 1);
  if (count <= kCandidateCap) {
    std::vector<std::size_t> idx(pick);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      out.push_back(idx);
      std::size_t i = pick;
      while (i > 0 && idx[i - 1] == total - pick + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < pick; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
  }
  Rng rng(derive_seed(seed, "generator-candidates"));
  std::vector<std::size_t> all(total);
  std::iota(all.begin(), all.end(), 0);
  std::set<std::vector<std::size_t>> seen;
  while (out.size() < kCandidateCap) {
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::size_t> c(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(pick));
    std::sort(c.begin(), c.end());
    if (seen.insert(c).second) out.push_back(c);
  }
  return out;
}

std::vector<Coords> project_all(const CongruenceGroup& from, const std::vector<Coords>& xs, std::uint32_t level) {
  std::vector<Coords> out;
  for (const auto& x : xs) out.push_back(from.project(x, level));
  return out;
}

}  // namespace

GeneratorMultiset make_multiset(const CongruenceGroup& group, std::vector<Coords> elements) {
  GeneratorMultiset s;
  s.group = group;
  s.elements = std::move(elements);
  s.inverse.assign(s.elements.size(), SIZE_MAX);
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    if (s.inverse[i] != SIZE_MAX) continue;
    const Coords inv = group.inv(s.elements[i]);
    if (inv == s.elements[i]) {
      s.inverse[i] = i;
      continue;
    }
    bool found = false;
    for (std::size_t j = i + 1; j < s.elements.size(); ++j) {
      if (s.inverse[j] == SIZE_MAX && s.elements[j] == inv) {
        s.inverse[i] = j;
        s.inverse[j] = i;
        found = true;
        break;
      }
    }
    if (!found) throw InvalidArgument("generator multiset is not closed under inversion");
  }
  return s;
}

GeneratorMultiset with_identity(const GeneratorMultiset& s) {
  GeneratorMultiset out = s;
  out.elements.push_back(Coords{});
  out.inverse.push_back(out.elements.size() - 1);
  return out;
}

std::uint64_t bfs_closure(const GeneratorMultiset& s) {
  const auto& g = s.group;
  if (g.order64() == 0 || g.order64() > std::max<std::uint64_t>(kBfsLimit, gf::enumeration_budget())) {
    throw BudgetExceeded("bfs_closure: group too large to enumerate");
  }
  std::vector<Mat2> gens;
  for (const auto& e : s.elements) gens.push_back(g.encode(e));
  std::vector<char> seen(g.order64(), 0);
  std::vector<std::uint64_t> frontier{0};
  seen[0] = 1;
  std::uint64_t count = 1;
  while (!frontier.empty()) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t v : frontier) {
      const Mat2 mv = g.encode(g.coords(v));
      for (const auto& sm : gens) {
        const std::uint64_t w = g.index(g.decode(g.mul(sm, mv)));
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  return count;
}

GeneratorMultiset default_generators(std::uint32_t p, std::uint32_t m, std::size_t degree, std::uint64_t seed,
                                     GenerationPolicy policy) {
  if (degree < 3) throw InvalidArgument("generator degree must be at least 3");
  const CongruenceGroup top(p, std::max<std::uint32_t>(m, 2));
  const CongruenceGroup target(p, m);
  const auto pool = word_pool(top);
  const auto units = inverse_units(top, pool);
  const std::size_t pick = degree / 2;
  if (pick > units.size()) {
    throw InvalidArgument("degree " + std::to_string(degree) + " exceeds the generator pool");
  }
  const bool pad = degree % 2 == 1;
  auto combos = unit_combinations(units.size(), pick, seed);

  auto build = [&](const std::vector<std::size_t>& combo, const CongruenceGroup& level) {
    std::vector<Coords> elems;
    for (std::size_t u : combo) {
      elems.push_back(pool[units[u].s]);
      elems.push_back(pool[units[u].s_inv]);
    }
    elems = project_all(top, elems, level.m());
    if (pad) elems.push_back(Coords{});
    return make_multiset(level, std::move(elems));
  };

  const CongruenceGroup level1(p, 1);
  const bool can_score = level1.order64() <= SpectralOptions{}.dense_limit;
  struct Scored {
    double lambda;
    std::uint64_t closure;
    std::size_t order;
  };
  std::vector<Scored> scored;
  for (std::size_t i = 0; i < combos.size(); ++i) {
    auto s1 = build(combos[i], level1);
    const std::uint64_t closure = bfs_closure(s1);
    double lambda = 0;
    if (can_score) lambda = spectral_expansion(CayleyMultigraph(s1)).lambda;
    scored.push_back({lambda, closure, i});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.closure != b.closure) return a.closure > b.closure;
    return a.lambda < b.lambda - 1e-12;
  });

  std::vector<std::uint32_t> levels{1, 2};
  if (m > 2 && target.order64() != 0 && target.order64() <= kBfsLimit) levels.push_back(m);
  for (const auto& sc : scored) {
    if (sc.closure != level1.order64()) break;
    bool ok = true;
    std::string check;
    for (std::uint32_t lv : levels) {
      const CongruenceGroup g(p, lv);
      if (g.order64() == 0 || g.order64() > kBfsLimit) {
        check += "m=" + std::to_string(lv) + ":skipped ";
        continue;
      }
      if (bfs_closure(build(combos[sc.order], g)) != g.order64()) {
        ok = false;
        break;
      }
      check += "m=" + std::to_string(lv) + ":bfs ";
    }
    if (!ok) continue;
    auto out = build(combos[sc.order], target);
    out.generates = true;
    if (!check.empty()) check.pop_back();
    out.generation_check = check;
    return out;
  }
  if (policy == GenerationPolicy::require) {
    throw GenerationFailure("no symmetric multiset of size " + std::to_string(degree) + " from the word pool generates G_" +
                            std::to_string(m) + " for p=" + std::to_string(p));
  }
  auto out = build(combos[scored.front().order], target);
  out.generates = false;
  out.generation_check = "best-effort: closure " + std::to_string(scored.front().closure) + " of " +
                         std::to_string(level1.order64()) + " at m=1";
  return out;
}

CayleyMultigraph::CayleyMultigraph(GeneratorMultiset gens) : gens_(std::move(gens)) {
  for (const auto& e : gens_.elements) mats_.push_back(gens_.group.encode(e));
}

Mat2 CayleyMultigraph::generator_matrix(std::size_t gen) const {
  if (gen >= mats_.size()) throw InvalidArgument("generator index out of range");
  return mats_[gen];
}

std::uint64_t CayleyMultigraph::neighbor(std::uint64_t vertex, std::size_t gen) const {
  const auto& g = gens_.group;
  return g.index(g.decode(g.mul(generator_matrix(gen), g.encode(g.coords(vertex)))));
}

std::uint64_t CayleyMultigraph::neighbor_right(std::uint64_t vertex, std::size_t gen) const {
  const auto& g = gens_.group;
  return g.index(g.decode(g.mul(g.encode(g.coords(vertex)), generator_matrix(gen))));
}

BigIndex CayleyMultigraph::neighbor(const BigIndex& vertex, std::size_t gen) const {
  const auto& g = gens_.group;
  return g.big_index(g.decode(g.mul(generator_matrix(gen), g.encode(g.coords(vertex)))));
}

SpectralReport spectral_expansion(const CayleyMultigraph& g, const SpectralOptions& opts) {
  if (g.vertex_count() == 0) throw BudgetExceeded("spectral_expansion: group order exceeds 64 bits");
  return spectral_expansion(g.vertex_count(), g.degree(),
                            [&g](std::uint64_t v, std::size_t i) { return g.neighbor(v, i); }, opts);
}

nlohmann::json to_json(const GeneratorMultiset& s) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& e : s.elements) gens.push_back({e.a, e.b, e.c});
  return {{"p", s.group.p()},
          {"m", s.group.m()},
          {"degree", s.size()},
          {"generators", std::move(gens)},
          {"generates", s.generates},
          {"generation_check", s.generation_check}};
}

GeneratorMultiset generators_from_json(const nlohmann::json& j) {
  try {
    const CongruenceGroup g(j.at("p").get<std::uint32_t>(), j.at("m").get<std::uint32_t>());
    std::vector<Coords> elems;
    for (const auto& e : j.at("generators")) {
      elems.push_back({e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>(), e.at(2).get<std::uint64_t>()});
    }
    if (j.contains("degree") && j.at("degree").get<std::size_t>() != elems.size()) {
      throw IoError("graph json: degree does not match generator count");
    }
    auto s = make_multiset(g, std::move(elems));
    s.generates = j.value("generates", false);
    s.generation_check = j.value("generation_check", std::string());
    return s;
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("graph json: ") + ex.what());
  }
}

}  // namespace qtanner::expander
