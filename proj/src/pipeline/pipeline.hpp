#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace qtanner::pipeline {

inline const std::vector<std::string> kAllStages = {"expander", "inner", "code", "verify", "dimension",
                                                    "distance", "ssexp", "csp",  "nlts"};

struct RunConfig {
  std::uint32_t p = 2;            // field of the code
  std::uint32_t group_prime = 3;  // prime of the congruence group
  std::uint32_t m = 1;
  std::size_t delta = 5;
  std::size_t k_a = 2, k_b = 3;
  double rho_target = 0.0;
  std::uint64_t seed = 1;
  std::uint64_t enumeration_budget = std::uint64_t{1} << 24;
  std::size_t inner_candidates = 64;
  std::string convention = "local_inverse";
  std::string generation = "best_effort";
  std::size_t distance_trials = 20;
  std::vector<double> ssexp_eps = {0.005, 0.01, 0.02};
  std::size_t ssexp_trials = 200;
  std::string nlts_code = "steane";
  double nlts_eps = 1.0 / 3;
  double nlts_c1 = 0.2;
  std::string output_dir = "qtanner-out";
  std::vector<std::string> stages = kAllStages;

  std::uint64_t group_order() const;
  std::uint64_t block_length() const { return group_order() * delta * delta; }
};

// Validates types, ranges and stage names; unknown keys are rejected. Values in
// `overrides` replace those in `j`.
RunConfig config_from_json(const nlohmann::json& j, const nlohmann::json& overrides = nlohmann::json::object());
nlohmann::json to_json(const RunConfig& c);

// gcd(|G| delta^2, p) = 1, checked before anything is built.
void precheck(const RunConfig& c);

// Runs the stages in order, writes each artifact under output_dir and returns the
// manifest (also written as manifest.json).
nlohmann::json run_pipeline(const RunConfig& c);

nlohmann::json load_manifest(const std::filesystem::path& dir);
// Human-readable summary built only from values stored in the manifest.
std::string report(const nlohmann::json& manifest);

}  // namespace qtanner::pipeline
