#include "nlts/clusters.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "gf/linalg.hpp"

namespace qtanner::nlts {

namespace {

constexpr double kSlack = 1e-9;

struct UnionFind {
  std::vector<std::int32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<std::uint8_t> coset_weight_table(const BitEchelon& span, std::size_t n) {
  const std::size_t total = std::size_t{1} << n;
  std::vector<std::uint8_t> best(total, 0xff);
  for (std::size_t v = 0; v < total; ++v) {
    auto& b = best[span.reduce(static_cast<Bits>(v))];
    b = std::min<std::uint8_t>(b, static_cast<std::uint8_t>(popcount(static_cast<Bits>(v))));
  }
  std::vector<std::uint8_t> out(total);
  for (std::size_t v = 0; v < total; ++v) out[v] = best[span.reduce(static_cast<Bits>(v))];
  return out;
}

// Closest pair between differently labelled sources by a multi-source BFS on
// the hypercube: the nearest pair always meets across some edge.
std::optional<std::pair<Bits, Bits>> closest_pair(std::size_t n, const std::vector<std::pair<Bits, std::int32_t>>& sources) {
  const std::size_t total = std::size_t{1} << n;
  std::vector<std::int32_t> label(total, -1);
  std::vector<Bits> origin(total, 0);
  std::vector<Bits> frontier;
  for (auto [v, l] : sources) {
    label[v] = l;
    origin[v] = v;
    frontier.push_back(v);
  }
  std::optional<std::pair<Bits, Bits>> best;
  auto consider = [&](Bits a, Bits b) {
    const Bits u = origin[a], w = origin[b];
    if (!best || popcount(u ^ w) < popcount(best->first ^ best->second) ||
        (popcount(u ^ w) == popcount(best->first ^ best->second) && std::minmax(u, w) < std::minmax(best->first, best->second)))
      best = std::minmax(u, w);
  };
  while (!frontier.empty()) {
    std::vector<Bits> next;
    for (Bits v : frontier)
      for (std::size_t i = 0; i < n; ++i) {
        const Bits u = v ^ (Bits{1} << i);
        if (label[u] < 0) {
          label[u] = label[v];
          origin[u] = origin[v];
          next.push_back(u);
        }
      }
    frontier = std::move(next);
  }
  for (std::size_t v = 0; v < total; ++v)
    for (std::size_t i = 0; i < n; ++i) {
      const Bits u = static_cast<Bits>(v) ^ (Bits{1} << i);
      if (label[u] != label[v]) consider(static_cast<Bits>(v), u);
    }
  return best;
}

std::string hex(Bits v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%x", v);
  return buf;
}

}  // namespace

std::string to_string(Basis b) { return b == Basis::x ? "X" : "Z"; }

Basis basis_from_string(const std::string& s) {
  if (s == "X" || s == "x") return Basis::x;
  if (s == "Z" || s == "z") return Basis::z;
  throw InvalidArgument("basis must be X or Z, got '" + s + "'");
}

SyndromeSet enumerate_syndrome_set(const tanner::CssCode& code, Basis basis, double eps, std::uint64_t cap) {
  if (!(eps >= 0) || !std::isfinite(eps)) throw DomainError("eps must be a finite non-negative number");
  SyndromeSet s;
  s.basis = basis;
  s.eps = eps;
  s.n = code.n();
  if (s.n > 30 || (std::uint64_t{1} << s.n) > cap)
    throw BudgetExceeded("syndrome set needs 2^" + std::to_string(s.n) + " states, cap is " + std::to_string(cap));
  const auto& h = basis == Basis::z ? code.hz : code.hx;
  const auto& other = basis == Basis::z ? code.hx : code.hz;
  s.checks = row_masks(h);
  s.dual = row_masks(other);
  s.m = h.rows();
  const double limit = eps * static_cast<double>(s.m) + kSlack;
  const std::size_t total = std::size_t{1} << s.n;
  s.index.assign(total, -1);
  for (std::size_t y = 0; y < total; ++y)
    if (static_cast<double>(syndrome_weight(s.checks, static_cast<Bits>(y))) <= limit) {
      s.index[y] = static_cast<std::int32_t>(s.members.size());
      s.members.push_back(static_cast<Bits>(y));
    }
  return s;
}

Bits ClusterPartition::syndrome_key(Bits y) const { return kernel.reduce(y); }

ClusterPartition build_clusters(const SyndromeSet& set, double c1) {
  if (!(c1 >= 0) || !std::isfinite(c1)) throw DomainError("c1 must be a finite non-negative number");
  ClusterPartition p;
  p.set = set;
  p.c1 = c1;
  p.radius = 2 * c1 * set.eps * static_cast<double>(set.n);
  p.kernel = span_of(kernel_masks(set.checks, set.n));
  p.dual_span = span_of(set.dual);
  p.coset_weight = coset_weight_table(p.dual_span, set.n);
  for (std::size_t v = 1; v < p.coset_weight.size(); ++v)
    if (p.coset_weight[v] <= p.radius + kSlack) p.near.push_back(static_cast<Bits>(v));

  const std::size_t g = set.size();
  UnionFind uf(g);
  for (std::size_t i = 0; i < g; ++i)
    for (Bits v : p.near) {
      const auto j = set.index[set.members[i] ^ v];
      if (j >= 0) uf.unite(static_cast<std::int32_t>(i), j);
    }
  // Roots are least member indices, so numbering by first appearance orders
  // clusters by least member.
  p.cluster_of.assign(g, -1);
  std::vector<std::int32_t> id_of_root(g, -1);
  for (std::size_t i = 0; i < g; ++i) {
    const auto r = uf.find(static_cast<std::int32_t>(i));
    if (id_of_root[r] < 0) {
      id_of_root[r] = static_cast<std::int32_t>(p.clusters.size());
      p.clusters.emplace_back();
    }
    p.cluster_of[i] = id_of_root[r];
    p.clusters[id_of_root[r]].push_back(set.members[i]);
  }

  const std::size_t nc = p.clusters.size();
  UnionFind classes(nc);
  for (std::size_t i = 0; i < g; ++i)
    for (Bits c : p.kernel.basis()) classes.unite(p.cluster_of[i], p.cluster_of[set.index[set.members[i] ^ c]]);
  p.translate_class.assign(nc, -1);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto root = classes.find(static_cast<std::int32_t>(c));
    if (p.translate_class[root] < 0) {
      p.translate_class[root] = static_cast<std::int32_t>(p.class_cluster.size());
      p.class_cluster.push_back(root);
    }
    p.translate_class[c] = p.translate_class[root];
  }

  for (std::size_t i = 0; i < g; ++i) {
    const Bits y = set.members[i];
    const auto cl = p.cluster_of[i];
    if (p.class_cluster[p.translate_class[cl]] == cl) p.representative.emplace(p.syndrome_key(y), y);
  }
  for (Bits y : set.members)
    if (p.representative.emplace(p.syndrome_key(y), y).second) ++p.fallback_representatives;
  return p;
}

ClusterLemmaReport verify_cluster_lemma(const ClusterPartition& p, double c2) {
  if (!(c2 >= 0) || !std::isfinite(c2)) throw DomainError("c2 must be a finite non-negative number");
  const auto& s = p.set;
  ClusterLemmaReport r;
  r.required_separation = c2 * static_cast<double>(s.n);
  auto fail = [&](const std::string& msg) {
    if (r.failure.empty()) r.failure = msg;
  };

  // (1) the pointwise sets coincide with the components
  r.partition = true;
  for (std::size_t i = 0; i < s.size() && r.partition; ++i) {
    const Bits y = s.members[i];
    std::size_t pointwise = 1;
    for (Bits v : p.near) pointwise += s.contains(y ^ v) ? 1 : 0;
    const auto& cl = p.clusters[p.cluster_of[i]];
    if (pointwise == cl.size()) continue;
    r.partition = false;
    for (Bits z : cl)
      if (p.coset_weight[y ^ z] > p.radius + kSlack) {
        r.partition_witness = std::pair{y, z};
        break;
      }
    fail("partition: Cl(" + hex(y) + ") differs from its connected component");
  }

  // (2) separation
  if (p.clusters.size() > 1) {
    std::vector<std::pair<Bits, std::int32_t>> sources;
    for (std::size_t i = 0; i < s.size(); ++i) sources.emplace_back(s.members[i], p.cluster_of[i]);
    auto pair = closest_pair(s.n, sources);
    r.min_separation = static_cast<std::size_t>(popcount(pair->first ^ pair->second));
    r.separation = static_cast<double>(*r.min_separation) + kSlack >= r.required_separation;
    if (!r.separation) {
      r.separation_witness = pair;
      fail("separation: clusters at distance " + std::to_string(*r.min_separation) + " < c2 n");
    }
  } else {
    r.separation = true;
  }

  // (3) translate law over all of ker H
  const std::uint64_t span_size = std::uint64_t{1} << p.kernel.rank();
  gf::require_enumerable(2, static_cast<std::size_t>(p.kernel.rank()), "translate law check");
  if (span_size * s.size() > gf::enumeration_budget())
    throw BudgetExceeded("translate law check needs |G| * |ker H| = " + std::to_string(span_size * s.size()) + " steps");
  r.translate = true;
  std::vector<std::int32_t> image(p.clusters.size());
  for_each_span(p.kernel.basis(), [&](Bits c) {
    if (!r.translate) return;
    std::fill(image.begin(), image.end(), -1);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto from = p.cluster_of[i];
      const auto to = p.cluster_of[s.index[s.members[i] ^ c]];
      if (image[from] < 0) image[from] = to;
      if (image[from] != to) {
        r.translate = false;
        r.translate_witness = std::pair{s.members[i], c};
        fail("translate: Cl(y + c) != Cl(y) + c for y = " + hex(s.members[i]) + ", c = " + hex(c));
        return;
      }
    }
    const bool stabilizer = p.dual_span.contains(c);
    for (std::size_t cl = 0; cl < image.size(); ++cl)
      if ((image[cl] == static_cast<std::int32_t>(cl)) != stabilizer) {
        r.translate = false;
        r.translate_witness = std::pair{p.clusters[cl].front(), c};
        fail(std::string("translate: Cl(y + c) ") + (stabilizer ? "!=" : "==") + " Cl(y) for y = " +
             hex(p.clusters[cl].front()) + ", c = " + hex(c));
        return;
      }
  });

  // (4) decoder coset law
  r.decoder = true;
  for (const auto& cl : p.clusters) {
    const Bits y = cl.front();
    const Bits key = p.dual_span.reduce(p.decode(y));
    for (Bits z : cl)
      if (p.dual_span.reduce(p.decode(z)) != key) {
        r.decoder = false;
        r.decoder_witness = std::pair{y, z};
        fail("decoder: " + hex(y) + " and " + hex(z) + " decode to different cosets");
        break;
      }
    if (!r.decoder) break;
  }
  return r;
}

ClusteringConstants clustering_from_ssexp(double c1p, double c2p) {
  if (!(c1p > 0) || !(c2p > 0)) throw DomainError("expansion constants must be positive");
  return {1.0 / c2p, c1p, 1.0};
}

std::optional<Bits> clustering_violation(const SyndromeSet& set, double c1, double c2) {
  const auto weights = coset_weight_table(span_of(set.dual), set.n);
  const double n = static_cast<double>(set.n);
  for (Bits y : set.members) {
    const double w = weights[y];
    if (w > c1 * set.eps * n + kSlack && w < c2 * n - kSlack) return y;
  }
  return std::nullopt;
}

double measured_ssexp_constant(const tanner::CssCode& code, Basis basis, double c1p) {
  auto all = enumerate_syndrome_set(code, basis, std::numeric_limits<double>::max() / 4);
  const auto weights = coset_weight_table(span_of(all.dual), all.n);
  const double n = static_cast<double>(all.n), m = static_cast<double>(all.m);
  double best = std::numeric_limits<double>::infinity();
  for (Bits y : all.members) {
    if (popcount(y) > c1p * n + kSlack || weights[y] == 0) continue;
    const double ratio = (static_cast<double>(syndrome_weight(all.checks, y)) / m) / (weights[y] / n);
    best = std::min(best, ratio);
  }
  return best;
}

nlohmann::json to_json(const SyndromeSet& s) {
  return {{"basis", to_string(s.basis)}, {"eps", s.eps}, {"n", s.n}, {"m", s.m}, {"size", s.size()}, {"members", s.members}};
}

nlohmann::json to_json(const ClusterPartition& p) {
  nlohmann::json reps = nlohmann::json::array();
  for (auto [k, e] : p.representative) reps.push_back({{"key", k}, {"e", e}});
  return {{"basis", to_string(p.set.basis)},
          {"eps", p.set.eps},
          {"c1", p.c1},
          {"radius", p.radius},
          {"set_size", p.set.size()},
          {"clusters", p.clusters},
          {"translate_class", p.translate_class},
          {"representatives", reps},
          {"fallback_representatives", p.fallback_representatives}};
}

nlohmann::json to_json(const ClusterLemmaReport& r) {
  auto pr = [](const std::optional<std::pair<Bits, Bits>>& w) -> nlohmann::json {
    if (!w) return nullptr;
    return nlohmann::json::array({w->first, w->second});
  };
  nlohmann::json j = {{"partition", r.partition},
                      {"separation", r.separation},
                      {"translate", r.translate},
                      {"decoder", r.decoder},
                      {"all", r.all()},
                      {"required_separation", r.required_separation},
                      {"min_separation", r.min_separation ? nlohmann::json(*r.min_separation) : nlohmann::json(nullptr)},
                      {"partition_witness", pr(r.partition_witness)},
                      {"separation_witness", pr(r.separation_witness)},
                      {"translate_witness", pr(r.translate_witness)},
                      {"decoder_witness", pr(r.decoder_witness)}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

}  // namespace qtanner::nlts
