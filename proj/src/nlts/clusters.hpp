#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nlts/bits.hpp"
#include "tanner/code.hpp"

namespace qtanner::nlts {

enum class Basis { x, z };
std::string to_string(Basis b);
Basis basis_from_string(const std::string& s);

inline constexpr std::uint64_t kDefaultStateCap = std::uint64_t{1} << 22;

// All y in F_2^n with |H y| <= eps * m, where H = H_Z for the Z basis and H_X
// for the X basis. Coset distances are taken modulo the row space of the other
// matrix, translations range over ker H.
struct SyndromeSet {
  Basis basis = Basis::z;
  double eps = 0;
  std::size_t n = 0, m = 0;
  std::vector<Bits> checks;  // rows of H
  std::vector<Bits> dual;    // rows of the other matrix
  std::vector<Bits> members; // ascending
  std::vector<std::int32_t> index;  // 2^n entries, -1 outside the set

  bool contains(Bits y) const { return index[y] >= 0; }
  std::size_t size() const noexcept { return members.size(); }
};

SyndromeSet enumerate_syndrome_set(const tanner::CssCode& code, Basis basis, double eps,
                                   std::uint64_t cap = kDefaultStateCap);

struct ClusterPartition {
  SyndromeSet set;
  double c1 = 0;
  double radius = 0;  // 2 c1 eps n
  BitEchelon kernel;     // ker H, for syndrome keys
  BitEchelon dual_span;  // row space of the other matrix
  std::vector<std::uint8_t> coset_weight;  // |v| modulo the dual row space, all 2^n v
  std::vector<Bits> near;                  // nonzero v with coset weight <= radius
  std::vector<std::int32_t> cluster_of;    // by member index
  std::vector<std::vector<Bits>> clusters; // ordered by least member
  std::vector<std::int32_t> translate_class;   // by cluster
  std::vector<std::int32_t> class_cluster;     // designated cluster per class
  std::map<Bits, Bits> representative;         // syndrome key -> e(s)
  std::size_t fallback_representatives = 0;    // syndromes whose designated cluster missed the coset

  Bits syndrome_key(Bits y) const;
  Bits representative_of(Bits y) const { return representative.at(syndrome_key(y)); }
  Bits decode(Bits y) const { return y ^ representative_of(y); }
  std::int32_t cluster(Bits y) const { return cluster_of.at(static_cast<std::size_t>(set.index.at(y))); }
};

ClusterPartition build_clusters(const SyndromeSet& set, double c1);

struct ClusterLemmaReport {
  bool partition = false, separation = false, translate = false, decoder = false;
  std::optional<std::size_t> min_separation;  // Hamming distance between distinct clusters
  double required_separation = 0;             // c2 n
  std::optional<std::pair<Bits, Bits>> partition_witness, separation_witness, decoder_witness;
  std::optional<std::pair<Bits, Bits>> translate_witness;  // (y, c)
  std::string failure;
  bool all() const { return partition && separation && translate && decoder; }
};

ClusterLemmaReport verify_cluster_lemma(const ClusterPartition& part, double c2);

struct ClusteringConstants {
  double c1 = 0, c2 = 0, eps0 = 0;
};
ClusteringConstants clustering_from_ssexp(double c1p, double c2p);

// Checks the clustering dichotomy for one eps: every y in the set has coset
// weight <= c1 eps n or >= c2 n. Returns a violating y.
std::optional<Bits> clustering_violation(const SyndromeSet& set, double c1, double c2);

// Exhaustive largest c2' with |H y|/m >= c2' |y|_dual / n for all |y| <= c1' n.
double measured_ssexp_constant(const tanner::CssCode& code, Basis basis, double c1p);

nlohmann::json to_json(const SyndromeSet& s);
nlohmann::json to_json(const ClusterPartition& p);
nlohmann::json to_json(const ClusterLemmaReport& r);

}  // namespace qtanner::nlts
