#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "expander/group.hpp"
#include "expander/spectral.hpp"
#include "json.hpp"

namespace qtanner::expander {

enum class GenerationPolicy { require, best_effort };

// Symmetric multiset of group elements with an explicit inverse pairing.
struct GeneratorMultiset {
  CongruenceGroup group;
  std::vector<Coords> elements;
  std::vector<std::size_t> inverse;
  // Whether BFS confirmed that the multiset generates the group at every checked level.
  bool generates = false;
  std::string generation_check;

  std::size_t size() const noexcept { return elements.size(); }
};

// Validates symmetry and computes the pairing; throws InvalidArgument otherwise.
GeneratorMultiset make_multiset(const CongruenceGroup& group, std::vector<Coords> elements);
GeneratorMultiset with_identity(const GeneratorMultiset& s);

GeneratorMultiset default_generators(std::uint32_t p, std::uint32_t m, std::size_t degree, std::uint64_t seed = 0,
                                     GenerationPolicy policy = GenerationPolicy::require);

class CayleyMultigraph {
 public:
  CayleyMultigraph() = default;
  explicit CayleyMultigraph(GeneratorMultiset gens);

  const CongruenceGroup& group() const noexcept { return gens_.group; }
  const GeneratorMultiset& generators() const noexcept { return gens_; }
  std::size_t degree() const noexcept { return gens_.size(); }
  std::uint64_t vertex_count() const noexcept { return gens_.group.order64(); }

  // Index of s_i * g (left) or g * s_i (right).
  std::uint64_t neighbor(std::uint64_t vertex, std::size_t gen) const;
  std::uint64_t neighbor_right(std::uint64_t vertex, std::size_t gen) const;
  BigIndex neighbor(const BigIndex& vertex, std::size_t gen) const;

  Mat2 generator_matrix(std::size_t gen) const;

 private:
  GeneratorMultiset gens_;
  std::vector<Mat2> mats_;
};

// Size of the subgroup generated by the multiset, by breadth-first search.
std::uint64_t bfs_closure(const GeneratorMultiset& s);

SpectralReport spectral_expansion(const CayleyMultigraph& g, const SpectralOptions& opts = {});

nlohmann::json to_json(const GeneratorMultiset& s);
GeneratorMultiset generators_from_json(const nlohmann::json& j);

}  // namespace qtanner::expander
