#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qtanner/qtanner.h"

namespace {

using nlohmann::json;

struct Failure {
  qt_status status;
  std::string message;
};

int exit_code(qt_status s) {
  switch (s) {
    case QT_OK: return 0;
    case QT_ERR_INVALID_ARGUMENT:
    case QT_ERR_PRECONDITION: return 2;
    case QT_ERR_BUDGET_EXCEEDED: return 3;
    default: return 1;
  }
}

void check(qt_status s) {
  if (s != QT_OK) throw Failure{s, qt_last_error()};
}

[[noreturn]] void precondition(const std::string& what) { throw Failure{QT_ERR_PRECONDITION, what}; }

std::string take(char* s) {
  std::string out(s ? s : "");
  qt_string_free(s);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{QT_ERR_IO, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Output {
  std::string path;
  bool pretty = true;

  void text(const std::string& s) const {
    if (path.empty() || path == "-") {
      std::cout << s;
      if (s.empty() || s.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{QT_ERR_IO, "cannot write '" + path + "'"};
    out << s;
    if (s.empty() || s.back() != '\n') out << '\n';
  }
  void emit(const std::string& raw) const { text(pretty ? json::parse(raw).dump(2) : raw); }
  void emit(const json& j) const { text(pretty ? j.dump(2) : j.dump()); }
};

using CodePtr = std::unique_ptr<qt_code, decltype(&qt_code_free)>;
using InstPtr = std::unique_ptr<qt_instance, decltype(&qt_instance_free)>;

// "steane", "shor" or a path to a code JSON file
CodePtr load_code(const std::string& spec) {
  qt_code* c = nullptr;
  std::string name = spec.rfind("toy:", 0) == 0 ? spec.substr(4) : spec;
  if (name == "steane" || name == "shor")
    check(qt_code_toy(name.c_str(), &c));
  else
    check(qt_code_from_json(slurp(spec).c_str(), &c));
  return CodePtr(c, qt_code_free);
}

InstPtr load_instance(const std::string& path) {
  qt_instance* i = nullptr;
  check(qt_instance_from_json(slurp(path).c_str(), &i));
  return InstPtr(i, qt_instance_free);
}

std::string generators(uint32_t gp, uint32_t m, size_t degree, uint64_t seed, bool strict) {
  char* out = nullptr;
  check(qt_expander_generators(gp, m, degree, seed, strict ? 0 : 1, &out));
  return take(out);
}

std::string graph_json(const std::optional<std::string>& file, uint32_t gp, uint32_t m, size_t degree, uint64_t seed,
                       bool strict) {
  return file ? slurp(*file) : generators(gp, m, degree, seed, strict);
}

uint64_t ipow(uint64_t b, uint64_t e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

void coprimality(uint32_t p, uint32_t gp, uint32_t m, uint64_t delta) {
  const uint64_t g = ipow(gp, 3 * m);
  const uint64_t n = g * delta * delta;
  if (std::gcd(n, uint64_t{p}) != 1)
    precondition("coprimality precheck failed: gcd(|G|*Delta^2, p) = gcd(" + std::to_string(n) + ", " +
                 std::to_string(p) + ") != 1; the planted code needs the block length relatively prime with p");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum Tanner code laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(qt_version()));
  Output out;
  bool compact = false;
  uint64_t budget = 0;
  app.add_option("-o,--out", out.path, "output file (default stdout)");
  app.add_flag("--compact", compact, "single-line JSON");
  app.add_option("--enum-budget", budget, "cap on exhaustive enumeration sizes");

  std::vector<std::function<void()>> actions;
  auto on = [&](CLI::App* sub, std::function<void()> f) { sub->callback([&actions, f] { actions.push_back(f); }); };

  // expander
  auto* exp = app.add_subcommand("expander", "Cayley expanders over SL2(Z/p^m)");
  exp->require_subcommand(1);
  struct {
    uint32_t p = 3, m = 1;
    size_t degree = 5, gen = 0;
    uint64_t seed = 0;
    bool strict = false, identity = false;
    std::optional<std::string> graph;
    std::string vertex = "0";
  } e;
  auto graph_opts = [&](CLI::App* s) {
    s->add_option("--p", e.p, "group prime");
    s->add_option("--m", e.m, "level");
    s->add_option("--degree", e.degree, "generator multiset size");
    s->add_option("--seed", e.seed);
    s->add_flag("--strict", e.strict, "fail instead of falling back when the degree is not reachable");
    s->add_option("--graph", e.graph, "generator JSON file instead of --p/--m/--degree");
  };
  auto* eb = exp->add_subcommand("build", "generator multiset as JSON");
  eb->alias("generators");
  graph_opts(eb);
  on(eb, [&] { out.emit(generators(e.p, e.m, e.degree, e.seed, e.strict)); });
  auto* es = exp->add_subcommand("spectrum", "spectral report");
  graph_opts(es);
  es->add_flag("--with-identity", e.identity, "append the identity generator");
  on(es, [&] {
    char* r = nullptr;
    check(qt_expander_spectrum(graph_json(e.graph, e.p, e.m, e.degree, e.seed, e.strict).c_str(), e.identity, &r));
    out.emit(take(r));
  });
  auto* en = exp->add_subcommand("neighbor", "neighbor of a vertex along one generator");
  graph_opts(en);
  en->add_option("--vertex", e.vertex, "decimal vertex index a + p^m b + p^2m c");
  en->add_option("--gen", e.gen, "generator index");
  on(en, [&] {
    char* r = nullptr;
    check(qt_expander_neighbor(graph_json(e.graph, e.p, e.m, e.degree, e.seed, e.strict).c_str(), e.vertex.c_str(),
                               e.gen, &r));
    out.emit(json{{"vertex", e.vertex}, {"gen", e.gen}, {"neighbor", take(r)}});
  });
  auto* ec = exp->add_subcommand("check", "exhaustive coordinate bijection and closure check");
  ec->add_option("--p", e.p);
  ec->add_option("--m", e.m);
  on(ec, [&] {
    char* r = nullptr;
    check(qt_expander_group_check(e.p, e.m, &r));
    out.emit(take(r));
  });

  // inner
  auto* inn = app.add_subcommand("inner", "inner code pairs");
  inn->require_subcommand(1);
  struct {
    uint32_t p = 2, q = 2;
    size_t delta = 5, ka = 2, kb = 3, budget = 64;
    double rho = 0, x = 0.5;
    uint64_t seed = 0;
    std::string pair;
    bool inverse = false;
  } in;
  auto* is = inn->add_subcommand("search", "random search for a product-expanding pair");
  is->add_option("--p", in.p);
  is->add_option("--delta", in.delta);
  is->add_option("--ka", in.ka);
  is->add_option("--kb", in.kb);
  is->add_option("--rho", in.rho, "target product-expansion");
  is->add_option("--budget", in.budget, "candidate pairs to try");
  is->add_option("--seed", in.seed);
  on(is, [&] {
    char* r = nullptr;
    check(qt_inner_search(in.p, in.delta, in.ka, in.kb, in.rho, in.budget, in.seed, &r));
    out.emit(take(r));
  });
  auto* ie = inn->add_subcommand("expansion", "exact product-expansion of a pair and its dual");
  ie->add_option("--pair", in.pair, "pair JSON file")->required();
  on(ie, [&] {
    char* r = nullptr;
    check(qt_inner_expansion(slurp(in.pair).c_str(), &r));
    out.emit(take(r));
  });
  auto* ient = inn->add_subcommand("entropy", "q-ary entropy or its inverse");
  ient->add_option("--x", in.x, "argument");
  ient->add_option("--q", in.q);
  ient->add_flag("--inverse", in.inverse);
  on(ient, [&] {
    double v = 0;
    check(in.inverse ? qt_entropy_inverse(in.x, in.q, &v) : qt_entropy(in.x, in.q, &v));
    out.emit(json{{"x", in.x}, {"q", in.q}, {in.inverse ? "h_inverse" : "h", v}});
  });

  // code
  auto* code = app.add_subcommand("code", "quantum Tanner codes");
  code->require_subcommand(1);
  struct {
    uint32_t p = 2, gp = 3, m = 1;
    size_t delta = 5, trials = 20, ssexp_trials = 200;
    uint64_t seed = 0;
    std::string inner, code = "steane", convention = "local_inverse", which = "X", toy = "steane";
    std::optional<std::string> graph;
    std::vector<double> eps{0.005, 0.01, 0.02};
  } c;
  auto* cb = code->add_subcommand("build", "build the code from a generator set and an inner pair");
  cb->add_option("--p", c.p, "field characteristic");
  cb->add_option("--group-prime", c.gp, "group prime");
  cb->add_option("--m", c.m);
  cb->add_option("--delta", c.delta);
  cb->add_option("--seed", c.seed);
  cb->add_option("--graph", c.graph, "generator JSON file");
  cb->add_option("--inner", c.inner, "inner pair JSON file")->required();
  cb->add_option("--convention", c.convention, "local_inverse or direct");
  on(cb, [&] {
    coprimality(c.p, c.gp, c.m, c.delta);
    qt_code* h = nullptr;
    check(qt_code_build(graph_json(c.graph, c.gp, c.m, c.delta, c.seed, false).c_str(), slurp(c.inner).c_str(),
                        c.convention.c_str(), &h));
    CodePtr owned(h, qt_code_free);
    char* r = nullptr;
    check(qt_code_to_json(h, &r));
    out.emit(take(r));
  });
  auto* ct = code->add_subcommand("toy", "steane or shor");
  ct->add_option("name", c.toy)->check(CLI::IsMember({"steane", "shor"}));
  on(ct, [&] {
    auto h = load_code(c.toy);
    char* r = nullptr;
    check(qt_code_to_json(h.get(), &r));
    out.emit(take(r));
  });
  auto code_opt = [&](CLI::App* s) { s->add_option("--code", c.code, "code JSON file, steane or shor"); };
  auto* cv = code->add_subcommand("verify", "planted report");
  code_opt(cv);
  on(cv, [&] {
    auto h = load_code(c.code);
    char* r = nullptr;
    check(qt_code_verify(h.get(), &r));
    out.emit(take(r));
  });
  auto* cd = code->add_subcommand("dimension", "exact dimension");
  code_opt(cd);
  on(cd, [&] {
    auto h = load_code(c.code);
    char* r = nullptr;
    check(qt_code_dimension(h.get(), &r));
    out.emit(take(r));
  });
  auto* cdist = code->add_subcommand("distance", "distance upper bound by information-set decoding");
  code_opt(cdist);
  cdist->add_option("--budget", c.trials, "decoding trials");
  cdist->add_option("--seed", c.seed);
  on(cdist, [&] {
    auto h = load_code(c.code);
    char* r = nullptr;
    check(qt_code_distance(h.get(), c.trials, c.seed, &r));
    out.emit(take(r));
  });
  auto* css = code->add_subcommand("ssexp", "empirical small-set boundary and coboundary expansion");
  code_opt(css);
  css->add_option("--eps", c.eps, "relative set sizes")->expected(1, -1);
  css->add_option("--trials", c.ssexp_trials);
  css->add_option("--seed", c.seed);
  on(css, [&] {
    auto h = load_code(c.code);
    char* r = nullptr;
    check(qt_code_ssexp(h.get(), c.eps.data(), c.eps.size(), c.ssexp_trials, c.seed, &r));
    out.emit(take(r));
  });
  auto* ca = code->add_subcommand("alist", "check matrix in alist format");
  code_opt(ca);
  ca->add_option("--which", c.which)->check(CLI::IsMember({"X", "Z"}));
  on(ca, [&] {
    auto h = load_code(c.code);
    char* r = nullptr;
    check(qt_code_alist(h.get(), c.which[0], &r));
    out.text(take(r));
  });

  // nlts
  auto* nl = app.add_subcommand("nlts", "clustering and circuit lower bounds on small codes");
  nl->require_subcommand(1);
  struct {
    std::string code = "steane", basis = "Z", state = "random";
    double eps = 1.0 / 3, c1 = 0.2, c2 = 1.0 / 7, n = 0, mu = 0, delta = 0;
    double eps0 = 0, rel = 0, c1p = 0, c2p = 0;
    size_t trials = 200;
    uint64_t seed = 0;
  } t;
  auto* nc = nl->add_subcommand("clusters", "syndrome clusters and the clustering lemma");
  nc->add_option("--code", t.code);
  nc->add_option("--basis", t.basis)->check(CLI::IsMember({"X", "Z"}));
  nc->add_option("--eps", t.eps);
  nc->add_option("--c1", t.c1);
  nc->add_option("--c2", t.c2);
  on(nc, [&] {
    auto h = load_code(t.code);
    char* r = nullptr;
    check(qt_nlts_clusters(h.get(), t.basis.c_str(), t.eps, t.c1, t.c2, &r));
    out.emit(take(r));
  });
  auto* ns = nl->add_subcommand("spread", "spread of a state or of random low-energy states");
  ns->add_option("--code", t.code);
  ns->add_option("--state", t.state, "state JSON file or random");
  ns->add_option("--trials", t.trials);
  ns->add_option("--eps", t.eps);
  ns->add_option("--c1", t.c1);
  ns->add_option("--seed", t.seed);
  on(ns, [&] {
    auto h = load_code(t.code);
    std::string st = t.state == "random" ? "" : slurp(t.state);
    char* r = nullptr;
    check(qt_nlts_spread(h.get(), st.empty() ? nullptr : st.c_str(), t.trials, t.eps, t.c1, t.seed, &r));
    out.emit(take(r));
  });
  auto* nh = nl->add_subcommand("hamiltonian", "exact diagonalization against the sector law");
  nh->add_option("--code", t.code);
  on(nh, [&] {
    auto h = load_code(t.code);
    char* r = nullptr;
    check(qt_nlts_hamiltonian(h.get(), &r));
    out.emit(take(r));
  });
  auto* nd = nl->add_subcommand("depth-bound", "circuit depth lower bound");
  nd->add_option("--n", t.n)->required();
  nd->add_option("--mu", t.mu)->required();
  nd->add_option("--delta", t.delta)->required();
  on(nd, [&] {
    double b = 0, nb = 0;
    check(qt_nlts_depth_bound(t.n, t.mu, t.delta, &b, &nb));
    out.emit(json{{"n", t.n}, {"mu", t.mu}, {"delta", t.delta}, {"depth_bound", b}, {"nlts_bound", nb}});
  });
  auto* ne = nl->add_subcommand("epsilon", "energy threshold from clustering constants");
  ne->add_option("--eps0", t.eps0)->required();
  ne->add_option("--c1", t.c1);
  ne->add_option("--c2", t.c2);
  ne->add_option("--relative-distance", t.rel)->required();
  on(ne, [&] {
    double eps = 0, epsp = 0;
    check(qt_nlts_epsilon_threshold(t.eps0, t.c1, t.c2, t.rel, &eps, &epsp));
    out.emit(json{{"epsilon", eps}, {"epsilon_prime", epsp}});
  });
  auto* nf = nl->add_subcommand("from-ssexp", "clustering constants from expansion constants");
  nf->add_option("--c1", t.c1p)->required();
  nf->add_option("--c2", t.c2p)->required();
  on(nf, [&] {
    double a = 0, b = 0, z = 0;
    check(qt_nlts_clustering_from_ssexp(t.c1p, t.c2p, &a, &b, &z));
    out.emit(json{{"c1", a}, {"c2", b}, {"eps0", z}});
  });

  // csp
  auto* cs = app.add_subcommand("csp", "linear constraint satisfaction instances");
  cs->require_subcommand(1);
  struct {
    std::string code = "steane", beta = "one", instance, mode = "exact";
    uint64_t seed = 0, budget = 0, index = 0;
    size_t restarts = 0;
    double c1 = -1, c2 = 0, m = 0, arity = 0;
    bool dimacs = false;
  } k;
  auto* ce = cs->add_subcommand("emit", "instance from a code and a planted vector");
  ce->add_option("--code", k.code);
  ce->add_option("--beta", k.beta, "one or a JSON file with the vector");
  on(ce, [&] {
    auto h = load_code(k.code);
    std::string beta = k.beta == "one" ? "one" : slurp(k.beta);
    qt_instance* i = nullptr;
    check(qt_csp_emit(h.get(), beta.c_str(), &i));
    InstPtr owned(i, qt_instance_free);
    char* r = nullptr;
    check(qt_instance_to_json(i, &r));
    out.emit(take(r));
  });
  auto inst_opt = [&](CLI::App* s) { s->add_option("--instance", k.instance, "instance JSON file")->required(); };
  auto* cu = cs->add_subcommand("unsat", "inconsistency certificate");
  inst_opt(cu);
  on(cu, [&] {
    auto i = load_instance(k.instance);
    char* r = nullptr;
    check(qt_csp_unsat(i.get(), &r));
    out.emit(take(r));
  });
  auto* cm = cs->add_subcommand("maxsat", "maximum satisfiable fraction");
  inst_opt(cm);
  cm->add_option("--mode", k.mode)->check(CLI::IsMember({"exact", "ls", "local-search"}));
  cm->add_option("--seed", k.seed);
  cm->add_option("--budget", k.budget, "assignment budget for exact mode");
  cm->add_option("--restarts", k.restarts);
  cm->add_option("--c1", k.c1, "soundness constant to compare against");
  on(cm, [&] {
    auto i = load_instance(k.instance);
    char* r = nullptr;
    check(qt_csp_maxsat(i.get(), k.mode.c_str(), k.seed, k.budget, k.restarts, k.c1, &r));
    out.emit(take(r));
  });
  auto* cr = cs->add_subcommand("reduce3", "reduction to 3-XOR");
  inst_opt(cr);
  cr->add_flag("--dimacs", k.dimacs, "DIMACS-like text instead of JSON");
  on(cr, [&] {
    auto i = load_instance(k.instance);
    char* r = nullptr;
    check(qt_csp_reduce3(i.get(), k.dimacs, &r));
    if (k.dimacs)
      out.text(take(r));
    else
      out.emit(take(r));
  });
  auto* cso = cs->add_subcommand("sos-bound", "degree lower bound for sum-of-squares refutation");
  cso->add_option("--c1", k.c1)->required();
  cso->add_option("--c2", k.c2)->required();
  cso->add_option("--m", k.m, "number of variables")->required();
  cso->add_option("--arity", k.arity)->required();
  on(cso, [&] {
    double v = 0;
    check(qt_csp_sos_bound(k.c1, k.c2, k.m, k.arity, &v));
    out.emit(json{{"sos_degree_lower_bound", v}});
  });
  auto* cco = cs->add_subcommand("constraint", "one constraint computed from the code provenance");
  cco->add_option("--code", k.code)->required();
  cco->add_option("--index", k.index);
  on(cco, [&] {
    auto h = load_code(k.code);
    qt_oracle* o = nullptr;
    check(qt_oracle_from_code(h.get(), &o));
    std::unique_ptr<qt_oracle, decltype(&qt_oracle_free)> owned(o, qt_oracle_free);
    char* r = nullptr;
    check(qt_oracle_constraint(o, k.index, &r));
    out.emit(take(r));
  });

  // pipeline
  auto* pl = app.add_subcommand("pipeline", "run the full pipeline");
  std::optional<std::string> config_path;
  std::optional<uint32_t> o_p, o_gp, o_m;
  std::optional<uint64_t> o_delta, o_ka, o_kb, o_seed;
  std::optional<double> o_rho;
  std::optional<std::string> o_dir, o_conv;
  std::vector<std::string> o_stages;
  bool dry = false;
  pl->add_option("--config", config_path, "config JSON file");
  pl->add_option("--p", o_p);
  pl->add_option("--group-prime", o_gp);
  pl->add_option("--m", o_m);
  pl->add_option("--delta", o_delta);
  pl->add_option("--ka", o_ka);
  pl->add_option("--kb", o_kb);
  pl->add_option("--rho", o_rho);
  pl->add_option("--seed", o_seed);
  pl->add_option("--output-dir", o_dir);
  pl->add_option("--convention", o_conv);
  pl->add_option("--stages", o_stages)->delimiter(',');
  pl->add_flag("--dry-run", dry, "print the normalized config only");
  on(pl, [&] {
    json cfg = config_path ? json::parse(slurp(*config_path), nullptr, false) : json::object();
    if (cfg.is_discarded()) throw Failure{QT_ERR_IO, "config file is not valid JSON"};
    json ov = json::object();
    if (o_p) ov["p"] = *o_p;
    if (o_gp) ov["group_prime"] = *o_gp;
    if (o_m) ov["m"] = *o_m;
    if (o_delta) ov["delta"] = *o_delta;
    if (o_ka) ov["k_A"] = *o_ka;
    if (o_kb) ov["k_B"] = *o_kb;
    if (o_rho) ov["rho_target"] = *o_rho;
    if (o_seed) ov["seed"] = *o_seed;
    if (o_dir) ov["output_dir"] = *o_dir;
    if (o_conv) ov["convention"] = *o_conv;
    if (!o_stages.empty()) ov["stages"] = o_stages;
    char* r = nullptr;
    if (dry)
      check(qt_config_normalize(cfg.dump().c_str(), ov.dump().c_str(), &r));
    else
      check(qt_pipeline_run(cfg.dump().c_str(), ov.dump().c_str(), &r));
    out.emit(take(r));
  });

  auto* rp = app.add_subcommand("report", "human-readable summary of a manifest");
  std::string manifest = "qtanner-out/manifest.json";
  rp->add_option("manifest", manifest, "manifest.json path");
  on(rp, [&] {
    char* r = nullptr;
    check(qt_pipeline_report(manifest.c_str(), &r));
    out.text(take(r));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : 2;
  }
  out.pretty = !compact;
  if (budget) qt_set_enumeration_budget(budget);
  try {
    for (auto& a : actions) a();
  } catch (const Failure& f) {
    std::cerr << json{{"error", qt_status_name(f.status)}, {"message", f.message}}.dump() << '\n';
    return exit_code(f.status);
  } catch (const std::exception& ex) {
    std::cerr << json{{"error", "internal"}, {"message", ex.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
