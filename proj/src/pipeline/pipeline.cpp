#include "pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "csp/lin.hpp"
#include "expander/cayley.hpp"
#include "gf/io.hpp"
#include "inner/search.hpp"
#include "nlts/spread.hpp"
#include "pipeline/hash.hpp"
#include "tanner/measure.hpp"
#include "util/rng.hpp"

namespace qtanner::pipeline {

using nlohmann::json;

namespace {

const std::map<std::string, std::vector<std::string>> kDependencies = {
    {"expander", {}},        {"inner", {}},          {"code", {"expander", "inner"}},
    {"verify", {"code"}},    {"dimension", {"code"}}, {"distance", {"code"}},
    {"ssexp", {"code"}},     {"csp", {"code", "verify"}}, {"nlts", {}},
};

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

template <class T>
T get_field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw PreconditionViolated(std::string("config field '") + key + "' has the wrong type");
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionViolated("config: " + what);
}

struct Artifact {
  std::string file, sha256;
  std::size_t bytes = 0;
};

json to_json(const Artifact& a) { return {{"file", a.file}, {"sha256", a.sha256}, {"bytes", a.bytes}}; }

class Writer {
 public:
  explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }
  Artifact write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << content;
    if (!out) throw IoError("cannot write artifact " + (dir_ / name).string());
    Artifact a{name, sha256_hex(content), content.size()};
    hashes_[name] = a.sha256;
    return a;
  }
  Artifact write_json(const std::string& name, const json& j) { return write(name, j.dump(2) + "\n"); }
  std::string hash(const std::string& name) const {
    auto it = hashes_.find(name);
    return it == hashes_.end() ? "" : it->second;
  }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> hashes_;
};

class BudgetScope {
 public:
  explicit BudgetScope(std::uint64_t b) : saved_(gf::enumeration_budget()) { gf::set_enumeration_budget(b); }
  ~BudgetScope() { gf::set_enumeration_budget(saved_); }

 private:
  std::uint64_t saved_;
};

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::uint64_t RunConfig::group_order() const {
  const auto order = gf::checked_pow(group_prime, 3ull * m);
  if (order == 0) throw BudgetExceeded("group order overflows 64 bits");
  return order;
}

RunConfig config_from_json(const json& in, const json& overrides) {
  if (!in.is_object()) throw PreconditionViolated("config must be a JSON object");
  if (!overrides.is_object()) throw PreconditionViolated("config overrides must be a JSON object");
  json j = in;
  for (auto it = overrides.begin(); it != overrides.end(); ++it) j[it.key()] = it.value();
  static const std::set<std::string> known = {"p",         "group_prime",   "m",          "delta",        "k_A",
                                              "k_B",       "rho_target",    "seed",       "enumeration_budget",
                                              "inner_candidates", "convention", "generation", "distance_trials",
                                              "ssexp_eps", "ssexp_trials",  "nlts_code",  "nlts_eps",     "nlts_c1",
                                              "output_dir", "stages"};
  for (auto it = j.begin(); it != j.end(); ++it)
    require(known.count(it.key()) > 0, "unknown field '" + it.key() + "'");
  RunConfig c;
  c.p = get_field(j, "p", c.p);
  c.group_prime = get_field(j, "group_prime", c.group_prime);
  c.m = get_field(j, "m", c.m);
  c.delta = get_field(j, "delta", c.delta);
  c.k_a = get_field(j, "k_A", c.k_a);
  c.k_b = get_field(j, "k_B", c.k_b);
  c.rho_target = get_field(j, "rho_target", c.rho_target);
  c.seed = get_field(j, "seed", c.seed);
  c.enumeration_budget = get_field(j, "enumeration_budget", c.enumeration_budget);
  c.inner_candidates = get_field(j, "inner_candidates", c.inner_candidates);
  c.convention = get_field(j, "convention", c.convention);
  c.generation = get_field(j, "generation", c.generation);
  c.distance_trials = get_field(j, "distance_trials", c.distance_trials);
  c.ssexp_eps = get_field(j, "ssexp_eps", c.ssexp_eps);
  c.ssexp_trials = get_field(j, "ssexp_trials", c.ssexp_trials);
  c.nlts_code = get_field(j, "nlts_code", c.nlts_code);
  c.nlts_eps = get_field(j, "nlts_eps", c.nlts_eps);
  c.nlts_c1 = get_field(j, "nlts_c1", c.nlts_c1);
  c.output_dir = get_field(j, "output_dir", c.output_dir);
  c.stages = get_field(j, "stages", c.stages);

  require(is_prime(c.p) && c.p < 65536, "p must be a prime below 2^16");
  require(is_prime(c.group_prime), "group_prime must be prime");
  require(c.m >= 1, "m must be >= 1");
  require(c.delta >= 2, "delta must be >= 2");
  require(c.k_a >= 1 && c.k_a < c.delta, "k_A must lie in [1, delta)");
  require(c.k_b >= 1 && c.k_b < c.delta, "k_B must lie in [1, delta)");
  require(c.rho_target >= 0 && c.rho_target <= 1, "rho_target must lie in [0, 1]");
  require(c.enumeration_budget >= 1, "enumeration_budget must be positive");
  require(c.inner_candidates >= 1, "inner_candidates must be positive");
  tanner::grid_convention_from_string(c.convention);
  require(c.generation == "best_effort" || c.generation == "require", "generation must be 'require' or 'best_effort'");
  for (double e : c.ssexp_eps) require(e > 0 && e <= 1, "ssexp_eps entries must lie in (0, 1]");
  require(c.nlts_eps >= 0 && c.nlts_c1 >= 0, "nlts_eps and nlts_c1 must be non-negative");
  require(!c.output_dir.empty(), "output_dir must be non-empty");
  std::set<std::string> seen;
  for (const auto& s : c.stages) {
    require(kDependencies.count(s) > 0, "unknown stage '" + s + "'");
    require(seen.insert(s).second, "stage '" + s + "' listed twice");
  }
  for (const auto& s : c.stages)
    for (const auto& dep : kDependencies.at(s))
      require(seen.count(dep) > 0, "stage '" + s + "' requires stage '" + dep + "'");
  c.group_order();
  return c;
}

json to_json(const RunConfig& c) {
  return {{"p", c.p},
          {"group_prime", c.group_prime},
          {"m", c.m},
          {"delta", c.delta},
          {"k_A", c.k_a},
          {"k_B", c.k_b},
          {"rho_target", c.rho_target},
          {"seed", c.seed},
          {"enumeration_budget", c.enumeration_budget},
          {"inner_candidates", c.inner_candidates},
          {"convention", c.convention},
          {"generation", c.generation},
          {"distance_trials", c.distance_trials},
          {"ssexp_eps", c.ssexp_eps},
          {"ssexp_trials", c.ssexp_trials},
          {"nlts_code", c.nlts_code},
          {"nlts_eps", c.nlts_eps},
          {"nlts_c1", c.nlts_c1},
          {"output_dir", c.output_dir},
          {"stages", c.stages}};
}

void precheck(const RunConfig& c) {
  const auto n = c.block_length();
  const auto g = std::gcd<std::uint64_t, std::uint64_t>(n, c.p);
  if (g != 1)
    throw PreconditionViolated("coprimality gcd(|G| delta^2, p) = 1 violated: n = " + std::to_string(n) +
                               ", p = " + std::to_string(c.p) + ", gcd = " + std::to_string(g));
}

json run_pipeline(const RunConfig& c) {
  precheck(c);
  BudgetScope budget(c.enumeration_budget);
  Writer w(c.output_dir);
  const std::set<std::string> wanted(c.stages.begin(), c.stages.end());

  json manifest = {{"format", "qtanner-manifest/1"}, {"config", to_json(c)}, {"stages", json::array()}};
  // output_dir does not affect any artifact, so it stays out of the hashed record
  manifest["config"].erase("output_dir");

  std::optional<expander::GeneratorMultiset> gens;
  std::optional<inner::InnerCodePair> pair;
  std::optional<tanner::CssCode> code;
  std::optional<tanner::PlantedReport> planted;

  auto run = [&](const std::string& name, std::vector<std::string> inputs, auto&& body) {
    if (!wanted.count(name)) return;
    json stage = {{"name", name}, {"artifacts", json::array()}, {"summary", json::object()}};
    try {
      body(stage);
    } catch (const Error& e) {
      std::string ctx;
      for (const auto& in : inputs) ctx += (ctx.empty() ? "" : ", ") + in + " sha256=" + w.hash(in).substr(0, 16);
      throw Error(e.code(), "stage '" + name + "' failed" + (ctx.empty() ? "" : " (inputs: " + ctx + ")") + ": " + e.what());
    }
    manifest["stages"].push_back(stage);
  };
  auto add = [](json& stage, const Artifact& a) { stage["artifacts"].push_back(to_json(a)); };

  run("expander", {}, [&](json& st) {
    const auto policy = c.generation == "require" ? expander::GenerationPolicy::require : expander::GenerationPolicy::best_effort;
    gens = expander::default_generators(c.group_prime, c.m, c.delta, derive_seed(c.seed, "expander"), policy);
    json art = {{"generators", expander::to_json(*gens)}};
    json& s = st["summary"];
    s["vertices"] = c.group_order();
    s["degree"] = gens->size();
    s["generates"] = gens->generates;
    s["generation_check"] = gens->generation_check;
    if (c.group_order() <= 1'000'000) {
      auto spec = expander::spectral_expansion(expander::CayleyMultigraph(*gens));
      art["spectral"] = expander::to_json(spec);
      s["lambda"] = spec.lambda;
      s["second"] = spec.second;
      s["lambda_over_delta"] = spec.lambda / static_cast<double>(c.delta);
      s["ramanujan"] = spec.ramanujan;
    } else {
      s["spectral"] = "skipped: group too large";
    }
    add(st, w.write_json("expander.json", art));
  });

  run("inner", {}, [&](json& st) {
    pair = inner::search_inner_pair(c.p, c.delta, c.k_a, c.k_b, c.rho_target, c.inner_candidates,
                                    derive_seed(c.seed, "inner"));
    json& s = st["summary"];
    s["certification"] = inner::to_string(pair->certification);
    s["rho_target"] = pair->rho_target;
    s["rho_primal"] = pair->rho_primal ? json(*pair->rho_primal) : json(nullptr);
    s["rho_dual"] = pair->rho_dual ? json(*pair->rho_dual) : json(nullptr);
    s["rate_A"] = pair->rate_a();
    s["rate_B"] = pair->rate_b();
    s["candidates_tried"] = pair->candidates_tried;
    add(st, w.write_json("inner_pair.json", inner::to_json(*pair)));
  });

  run("code", {"expander.json", "inner_pair.json"}, [&](json& st) {
    auto cx = tanner::build_complex(*gens, *gens);
    code = tanner::build_code(cx, *pair, tanner::grid_convention_from_string(c.convention));
    json& s = st["summary"];
    s["n"] = code->n();
    s["m_X"] = code->hx.rows();
    s["m_Z"] = code->hz.rows();
    s["locality"] = code->locality();
    s["orthogonal"] = code->orthogonal();
    s["faces"] = cx.face_count();
    if (!code->orthogonal()) throw PreconditionViolated("H_X H_Z^T != 0");
    add(st, w.write_json("code.json", tanner::to_json(*code)));
    add(st, w.write("hx.alist", gf::to_alist(code->hx)));
    add(st, w.write("hz.alist", gf::to_alist(code->hz)));
  });

  run("verify", {"code.json"}, [&](json& st) {
    planted = tanner::verify_planted(*code);
    st["summary"] = tanner::to_json(*planted);
    st["summary"]["all"] = planted->all();
    add(st, w.write_json("planted.json", tanner::to_json(*planted)));
  });

  run("dimension", {"code.json"}, [&](json& st) {
    auto d = tanner::code_dimension(*code);
    st["summary"] = tanner::to_json(d);
    add(st, w.write_json("dimension.json", tanner::to_json(d)));
  });

  run("distance", {"code.json"}, [&](json& st) {
    auto d = tanner::estimate_distance(*code, c.distance_trials, derive_seed(c.seed, "distance"));
    json& s = st["summary"];
    s["exact"] = d.exact;
    s["trials"] = d.trials;
    s["d_upper"] = d.d() == gf::kInfinite ? json(nullptr) : json(d.d());
    add(st, w.write_json("distance.json", tanner::to_json(d)));
  });

  run("ssexp", {"code.json"}, [&](json& st) {
    auto [bd, cb] = tanner::estimate_ssexp(*code, c.ssexp_eps, c.ssexp_trials, derive_seed(c.seed, "ssexp"));
    json curves = json::array({tanner::to_json(bd), tanner::to_json(cb)});
    json& s = st["summary"];
    s["curves"] = json::array();
    for (const auto* curve : {&bd, &cb}) {
      json pts = json::array();
      for (const auto& p : curve->points)
        pts.push_back({{"eps", p.eps}, {"c2", finite_or_null(p.c2)}, {"samples", p.samples}, {"exhaustive", p.exhaustive}});
      s["curves"].push_back({{"side", curve->side}, {"points", pts}});
    }
    add(st, w.write_json("ssexp.json", curves));
  });

  run("csp", {"code.json", "planted.json"}, [&](json& st) {
    if (!planted->all()) throw PreconditionViolated("CSP emission needs every planted flag to hold");
    auto inst = csp::emit_planted_instance(*code);
    auto unsat = csp::certify_unsat(inst);
    json& s = st["summary"];
    s["variables"] = inst.m;
    s["constraints"] = inst.n();
    s["arity"] = inst.arity;
    s["locality"] = code->locality();
    s["inconsistent"] = unsat.inconsistent;
    s["sos_levels_per_c1c2"] = static_cast<double>(inst.m) / (4.0 * static_cast<double>(inst.arity));
    s["sos_note"] = "c1, c2 of the built code are not known; multiply by measured constants";
    add(st, w.write_json("instance.json", csp::to_json(inst)));
    add(st, w.write_json("unsat.json", csp::to_json(unsat)));
    if (c.p == 2) {
      auto x = csp::reduce_to_3xor(inst);
      s["xor_variables"] = x.vars;
      s["xor_clauses"] = x.clauses.size();
      add(st, w.write("instance.xor", csp::to_dimacs(x)));
    }
  });

  run("nlts", {}, [&](json& st) {
    auto toy = tanner::toy_code(c.nlts_code);
    json out = {{"code", c.nlts_code}, {"eps", c.nlts_eps}, {"c1", c.nlts_c1}};
    std::vector<nlts::ClusterPartition> parts;
    bool all = true;
    for (auto basis : {nlts::Basis::x, nlts::Basis::z}) {
      parts.push_back(nlts::build_clusters(nlts::enumerate_syndrome_set(toy, basis, c.nlts_eps), c.nlts_c1));
      // c2 at the measured separation
      auto probe = nlts::verify_cluster_lemma(parts.back(), 0);
      const double c2 = probe.min_separation ? static_cast<double>(*probe.min_separation) / static_cast<double>(toy.n()) : 1.0;
      auto rep = nlts::verify_cluster_lemma(parts.back(), c2);
      all = all && rep.all();
      out[nlts::to_string(basis)] = {{"clusters", parts.back().clusters.size()}, {"c2", c2}, {"lemma", nlts::to_json(rep)}};
    }
    auto ham = nlts::build_code_hamiltonian(toy);
    auto law = nlts::check_sector_law(toy, ham);
    out["sector_law"] = nlts::to_json(law);
    auto lg = nlts::find_logicals(toy);
    Rng rng(derive_seed(c.seed, "nlts"));
    std::size_t ok = 0;
    const std::size_t trials = 200;
    for (std::size_t t = 0; t < trials; ++t) {
      auto psi = nlts::random_sector_state(toy, c.nlts_eps, rng);
      auto r = nlts::measure_spread(psi, parts[0], parts[1], lg);
      ok += r.dichotomy && r.in_sector;
    }
    out["spread"] = {{"trials", trials}, {"dichotomy_holds", ok}, {"mu_prime", nlts::kMuPrime}};
    json& s = st["summary"];
    s["code"] = c.nlts_code;
    s["cluster_lemma"] = all;
    s["sector_law"] = law.holds();
    s["spread_dichotomy"] = std::to_string(ok) + "/" + std::to_string(trials);
    add(st, w.write_json("nlts.json", out));
  });

  w.write_json("manifest.json", manifest);
  return manifest;
}

json load_manifest(const std::filesystem::path& dir) {
  const auto path = std::filesystem::is_directory(dir) ? dir / "manifest.json" : dir;
  std::ifstream in(path);
  if (!in) throw MissingArtifact("no manifest at " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
}

std::string report(const json& manifest) {
  if (!manifest.is_object() || !manifest.contains("stages") || !manifest.contains("config"))
    throw MissingArtifact("manifest lacks config or stages");
  std::map<std::string, json> st;
  for (const auto& s : manifest.at("stages")) st[s.at("name").get<std::string>()] = s.at("summary");
  const auto& cfg = manifest.at("config");
  std::ostringstream os;
  auto val = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  os << "parameters\n";
  for (const char* k : {"p", "group_prime", "m", "delta", "k_A", "k_B", "rho_target", "seed", "convention"})
    os << "  " << k << " = " << val(cfg.at(k)) << '\n';
  auto section = [&](const char* name) -> const json* {
    auto it = st.find(name);
    if (it == st.end()) {
      os << name << ": skipped\n";
      return nullptr;
    }
    return &it->second;
  };
  if (const auto* s = section("expander")) {
    os << "expander\n  vertices = " << val(s->at("vertices")) << ", degree = " << val(s->at("degree"))
       << ", generates = " << val(s->at("generates")) << '\n';
    if (s->contains("lambda"))
      os << "  lambda = " << val(s->at("lambda")) << ", lambda/delta = " << val(s->at("lambda_over_delta")) << '\n';
  }
  if (const auto* s = section("inner"))
    os << "inner codes\n  certification = " << val(s->at("certification")) << ", rho_primal = " << val(s->at("rho_primal"))
       << ", rho_dual = " << val(s->at("rho_dual")) << '\n';
  if (const auto* s = section("code"))
    os << "code\n  n = " << val(s->at("n")) << ", m_X = " << val(s->at("m_X")) << ", m_Z = " << val(s->at("m_Z"))
       << ", locality = " << val(s->at("locality")) << '\n';
  if (const auto* s = section("verify")) os << "planted flags\n  all = " << val(s->at("all")) << '\n';
  if (const auto* s = section("dimension")) {
    os << "dimension\n  k = " << val(s->at("k")) << ", counting bound = " << val(s->value("counting_bound", json(nullptr)))
       << '\n';
    const auto v = st.find("verify");
    if (v != st.end() && v->second.value("all", false) && s->at("k").get<std::size_t>() >= 1)
      os << "  dimension >= 1 (planted)\n";
  }
  if (const auto* s = section("distance"))
    os << "distance\n  d <= " << val(s->at("d_upper")) << (s->at("exact").get<bool>() ? " (exact)" : " (upper bound)") << '\n';
  if (const auto* s = section("ssexp")) {
    os << "small-set expansion\n";
    for (const auto& curve : s->at("curves")) {
      os << "  " << val(curve.at("side")) << ':';
      for (const auto& p : curve.at("points")) os << " c2(" << val(p.at("eps")) << ")=" << val(p.at("c2"));
      os << '\n';
    }
  }
  if (const auto* s = section("csp")) {
    os << "csp\n  variables = " << val(s->at("variables")) << ", constraints = " << val(s->at("constraints"))
       << ", arity = " << val(s->at("arity")) << ", inconsistent = " << val(s->at("inconsistent")) << '\n';
    if (s->contains("xor_clauses"))
      os << "  3-XOR variables = " << val(s->at("xor_variables")) << ", clauses = " << val(s->at("xor_clauses")) << '\n';
  }
  if (const auto* s = section("nlts"))
    os << "nlts lab (" << val(s->at("code")) << ")\n  cluster lemma = " << val(s->at("cluster_lemma"))
       << ", sector law = " << val(s->at("sector_law")) << ", spread dichotomy = " << val(s->at("spread_dichotomy")) << '\n';
  return os.str();
}

}  // namespace qtanner::pipeline
