#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qtanner::expander {

using NeighborFn = std::function<std::uint64_t(std::uint64_t vertex, std::size_t gen)>;

struct SpectralOptions {
  std::uint64_t dense_limit = 5000;
  std::uint64_t iterative_limit = 1'000'000;
  double tolerance = 1e-9;
  std::size_t max_iterations = 200'000;
  std::uint64_t seed = 1;
};

struct SpectralReport {
  std::size_t degree = 0;
  std::uint64_t vertices = 0;
  double lambda = 0;
  // Second-largest signed eigenvalue.
  double second = 0;
  double ratio = 0;
  bool ramanujan = false;
  std::string method;
  double tolerance = 0;
  std::size_t iterations = 0;
};

// Full adjacency spectrum of a regular multigraph, ascending.
std::vector<double> adjacency_spectrum(std::uint64_t vertices, std::size_t degree, const NeighborFn& nb);

// Largest |eigenvalue| on the complement of the all-ones vector.
SpectralReport spectral_expansion(std::uint64_t vertices, std::size_t degree, const NeighborFn& nb,
                                  const SpectralOptions& opts = {});

nlohmann::json to_json(const SpectralReport& r);

}  // namespace qtanner::expander
