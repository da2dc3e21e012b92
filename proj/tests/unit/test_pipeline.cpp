#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "pipeline/hash.hpp"
#include "pipeline/pipeline.hpp"
#include "util/error.hpp"

using namespace qtanner;
using namespace qtanner::pipeline;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("qtanner-test-" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config validation") {
  auto c = config_from_json(json::object());
  CHECK(c.p == 2);
  CHECK(c.block_length() == 675);
  CHECK_THROWS_AS(config_from_json(json{{"p", 4}}), PreconditionViolated);
  CHECK_THROWS_AS(config_from_json(json{{"colour", 1}}), PreconditionViolated);
  CHECK_THROWS_AS(config_from_json(json{{"delta", "five"}}), PreconditionViolated);
  CHECK_THROWS_AS(config_from_json(json{{"stages", {"code"}}}), PreconditionViolated);
  CHECK_THROWS_AS(config_from_json(json{{"stages", {"warp"}}}), PreconditionViolated);
  auto o = config_from_json(json{{"delta", 4}}, json{{"delta", 3}, {"k_B", 1}});
  CHECK(o.delta == 3);
  auto back = config_from_json(to_json(o));
  CHECK(to_json(back) == to_json(o));
}

TEST_CASE("coprimality precheck") {
  auto c = config_from_json(json{{"p", 3}, {"group_prime", 3}, {"delta", 3}, {"k_A", 2}, {"k_B", 1}});
  CHECK(c.block_length() == 243);
  CHECK_THROWS_WITH_AS(precheck(c), doctest::Contains("coprimality"), PreconditionViolated);
  auto even = config_from_json(json{{"delta", 4}, {"k_B", 2}});
  CHECK_THROWS_AS(run_pipeline(even), PreconditionViolated);
}

TEST_CASE("pipeline run, determinism and report") {
  auto dir = scratch("run");
  auto c = config_from_json(json{{"output_dir", (dir / "a").string()}});
  auto m1 = run_pipeline(c);
  std::map<std::string, json> summary;
  for (const auto& s : m1.at("stages")) summary[s.at("name")] = s.at("summary");
  CHECK(summary.at("verify").at("all") == true);
  CHECK(summary.at("dimension").at("k").get<int>() >= 1);
  CHECK(summary.at("code").at("orthogonal") == true);
  CHECK(summary.at("csp").at("inconsistent") == true);
  CHECK(summary.at("nlts").at("cluster_lemma") == true);
  // every listed artifact exists with the recorded hash
  for (const auto& s : m1.at("stages"))
    for (const auto& a : s.at("artifacts")) CHECK(sha256_hex(slurp(dir / "a" / a.at("file").get<std::string>())) == a.at("sha256"));

  auto c2 = config_from_json(json{{"output_dir", (dir / "b").string()}});
  auto m2 = run_pipeline(c2);
  CHECK(m1.dump() == m2.dump());
  CHECK(slurp(dir / "a" / "manifest.json") == slurp(dir / "b" / "manifest.json"));

  auto text = report(load_manifest(dir / "a"));
  CHECK(text.find("dimension >= 1 (planted)") != std::string::npos);
  CHECK(text.find("n = 675") != std::string::npos);
  CHECK(text.find("k = " + summary.at("dimension").at("k").dump()) != std::string::npos);
  CHECK_THROWS_AS(load_manifest(dir / "missing"), MissingArtifact);
  std::filesystem::remove_all(dir);
}

TEST_CASE("report marks skipped stages") {
  auto dir = scratch("partial");
  auto c = config_from_json(json{{"output_dir", dir.string()}, {"stages", {"expander", "inner", "code", "verify", "dimension"}}});
  auto text = report(run_pipeline(c));
  CHECK(text.find("ssexp: skipped") != std::string::npos);
  CHECK(text.find("csp: skipped") != std::string::npos);
  std::filesystem::remove_all(dir);
}
