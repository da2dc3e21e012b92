#include "qtanner/qtanner.h"

#include <cmath>
#include <cstring>
#include <string>

#include "csp/lin.hpp"
#include "expander/cayley.hpp"
#include "gf/io.hpp"
#include "inner/entropy.hpp"
#include "inner/prodexp.hpp"
#include "inner/search.hpp"
#include "nlts/spread.hpp"
#include "pipeline/pipeline.hpp"
#include "tanner/measure.hpp"

struct qt_code {
  qtanner::tanner::CssCode code;
};
struct qt_instance {
  qtanner::csp::LinInstance inst;
};
struct qt_oracle {
  qtanner::csp::ConstraintOracle oracle;
};

namespace {

using namespace qtanner;
using nlohmann::json;

thread_local std::string g_last_error;

qt_status status_of(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return QT_ERR_INVALID_ARGUMENT;
    case Errc::precondition: return QT_ERR_PRECONDITION;
    case Errc::budget_exceeded: return QT_ERR_BUDGET_EXCEEDED;
    case Errc::search_exhausted: return QT_ERR_SEARCH_EXHAUSTED;
    case Errc::convergence: return QT_ERR_CONVERGENCE;
    case Errc::generation_failure: return QT_ERR_GENERATION;
    case Errc::io: return QT_ERR_IO;
    case Errc::internal: return QT_ERR_INTERNAL;
  }
  return QT_ERR_INTERNAL;
}

template <class F>
qt_status guard(F&& f) {
  try {
    f();
    return QT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("malformed JSON: ") + e.what();
    return QT_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QT_ERR_BUDGET_EXCEEDED;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QT_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw InvalidArgument(std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const json& j) {
  need(out, "output pointer");
  *out = dup(j.dump());
}

json parse(const char* text, const char* what) {
  need(text, what);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

template <class T>
T* make_handle(T value) {
  return new T(std::move(value));
}

}  // namespace

extern "C" {

const char* qt_version(void) { return "1.0.0"; }
const char* qt_last_error(void) { return g_last_error.c_str(); }

const char* qt_status_name(qt_status s) {
  switch (s) {
    case QT_OK: return "ok";
    case QT_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case QT_ERR_PRECONDITION: return "precondition";
    case QT_ERR_BUDGET_EXCEEDED: return "budget_exceeded";
    case QT_ERR_SEARCH_EXHAUSTED: return "search_exhausted";
    case QT_ERR_CONVERGENCE: return "convergence";
    case QT_ERR_GENERATION: return "generation_failure";
    case QT_ERR_IO: return "io";
    case QT_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void qt_string_free(char* s) { std::free(s); }

void qt_set_enumeration_budget(uint64_t budget) { gf::set_enumeration_budget(budget); }
uint64_t qt_enumeration_budget(void) { return gf::enumeration_budget(); }

qt_status qt_expander_generators(uint32_t p, uint32_t m, size_t degree, uint64_t seed, int best_effort, char** out) {
  return guard([&] {
    auto g = expander::default_generators(p, m, degree, seed,
                                          best_effort ? expander::GenerationPolicy::best_effort
                                                      : expander::GenerationPolicy::require);
    emit(out, expander::to_json(g));
  });
}

qt_status qt_expander_spectrum(const char* generators_json, int with_identity, char** out) {
  return guard([&] {
    auto g = expander::generators_from_json(parse(generators_json, "generators"));
    if (with_identity) g = expander::with_identity(g);
    emit(out, expander::to_json(expander::spectral_expansion(expander::CayleyMultigraph(g))));
  });
}

qt_status qt_expander_neighbor(const char* generators_json, const char* vertex, size_t gen, char** out) {
  return guard([&] {
    need(vertex, "vertex");
    auto g = expander::generators_from_json(parse(generators_json, "generators"));
    if (gen >= g.size()) throw InvalidArgument("generator index out of range");
    expander::BigIndex v;
    try {
      v = expander::BigIndex(std::string(vertex));
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("vertex '") + vertex + "' is not a decimal integer");
    }
    if (v >= g.group.order()) throw InvalidArgument("vertex index exceeds the group order");
    expander::CayleyMultigraph graph(g);
    need(out, "output pointer");
    *out = dup(graph.neighbor(v, gen).str());
  });
}

qt_status qt_expander_group_check(uint32_t p, uint32_t m, char** out) {
  return guard([&] {
    expander::CongruenceGroup g(p, m);
    const auto order = g.order64();
    if (order == 0 || order > gf::enumeration_budget()) throw BudgetExceeded("group too large to enumerate");
    std::uint64_t bijective = 0;
    for (std::uint64_t i = 0; i < order; ++i) {
      const auto x = g.coords(i);
      const auto mat = g.encode(x);
      bijective += g.decode(mat) == x && g.index(x) == i && g.det(mat) == 1;
    }
    // closure of the two unipotent letters plus the congruence element
    auto gens = expander::default_generators(p, m, 6, 0, expander::GenerationPolicy::best_effort);
    emit(out, json{{"p", p},
                   {"m", m},
                   {"order", order},
                   {"bijective", bijective},
                   {"closure", expander::bfs_closure(gens)},
                   {"closure_degree", gens.size()}});
  });
}

qt_status qt_inner_search(uint32_t p, size_t delta, size_t k_a, size_t k_b, double rho, size_t budget, uint64_t seed,
                          char** out) {
  return guard([&] { emit(out, inner::to_json(inner::search_inner_pair(p, delta, k_a, k_b, rho, budget, seed))); });
}

qt_status qt_inner_expansion(const char* pair_json, char** out) {
  return guard([&] {
    auto pair = inner::pair_from_json(parse(pair_json, "pair"));
    json j = {{"primal", inner::to_json(inner::product_expansion_exact(pair.a, pair.b))},
              {"dual", inner::to_json(inner::product_expansion_exact(pair.a.dual(), pair.b.dual()))}};
    emit(out, j);
  });
}

qt_status qt_entropy(double x, uint32_t q, double* out) {
  return guard([&] {
    need(out, "output pointer");
    *out = inner::q_entropy(x, q);
  });
}

qt_status qt_entropy_inverse(double y, uint32_t q, double* out) {
  return guard([&] {
    need(out, "output pointer");
    *out = inner::q_entropy_inv(y, q);
  });
}

qt_status qt_code_build(const char* generators_json, const char* pair_json, const char* convention, qt_code** out) {
  return guard([&] {
    need(out, "output pointer");
    auto g = expander::generators_from_json(parse(generators_json, "generators"));
    auto pair = inner::pair_from_json(parse(pair_json, "pair"));
    const auto conv = tanner::grid_convention_from_string(convention ? convention : "local_inverse");
    *out = make_handle(qt_code{tanner::build_code(tanner::build_complex(g, g), pair, conv)});
  });
}

qt_status qt_code_from_json(const char* text, qt_code** out) {
  return guard([&] {
    need(out, "output pointer");
    *out = make_handle(qt_code{tanner::code_from_json(parse(text, "code"))});
  });
}

qt_status qt_code_toy(const char* name, qt_code** out) {
  return guard([&] {
    need(name, "name");
    need(out, "output pointer");
    *out = make_handle(qt_code{tanner::toy_code(name)});
  });
}

void qt_code_free(qt_code* code) { delete code; }

qt_status qt_code_to_json(const qt_code* code, char** out) {
  return guard([&] {
    need(code, "code");
    emit(out, tanner::to_json(code->code));
  });
}

qt_status qt_code_info(const qt_code* code, size_t* n, size_t* m_x, size_t* m_z, size_t* locality) {
  return guard([&] {
    need(code, "code");
    if (n) *n = code->code.n();
    if (m_x) *m_x = code->code.hx.rows();
    if (m_z) *m_z = code->code.hz.rows();
    if (locality) *locality = code->code.locality();
  });
}

qt_status qt_code_alist(const qt_code* code, char which, char** out) {
  return guard([&] {
    need(code, "code");
    need(out, "output pointer");
    if (which != 'X' && which != 'Z' && which != 'x' && which != 'z') throw InvalidArgument("which must be 'X' or 'Z'");
    *out = dup(gf::to_alist(which == 'X' || which == 'x' ? code->code.hx : code->code.hz));
  });
}

qt_status qt_code_verify(const qt_code* code, char** out) {
  return guard([&] {
    need(code, "code");
    auto r = tanner::verify_planted(code->code);
    json j = tanner::to_json(r);
    j["all"] = r.all();
    j["orthogonal"] = code->code.orthogonal();
    emit(out, j);
  });
}

qt_status qt_code_dimension(const qt_code* code, char** out) {
  return guard([&] {
    need(code, "code");
    emit(out, tanner::to_json(tanner::code_dimension(code->code)));
  });
}

qt_status qt_code_distance(const qt_code* code, size_t trials, uint64_t seed, char** out) {
  return guard([&] {
    need(code, "code");
    emit(out, tanner::to_json(tanner::estimate_distance(code->code, trials, seed)));
  });
}

qt_status qt_code_ssexp(const qt_code* code, const double* eps, size_t count, size_t trials, uint64_t seed, char** out) {
  return guard([&] {
    need(code, "code");
    if (count) need(eps, "eps");
    std::vector<double> grid(eps, eps + count);
    auto [bd, cb] = tanner::estimate_ssexp(code->code, grid, trials, seed);
    emit(out, json::array({tanner::to_json(bd), tanner::to_json(cb)}));
  });
}

qt_status qt_csp_emit(const qt_code* code, const char* beta, qt_instance** out) {
  return guard([&] {
    need(code, "code");
    need(out, "output pointer");
    if (!beta || std::string(beta) == "one") {
      *out = make_handle(qt_instance{csp::emit_planted_instance(code->code)});
      return;
    }
    auto v = gf::vector_from_json(parse(beta, "beta"), code->code.field());
    *out = make_handle(qt_instance{csp::emit_lin_instance(code->code, v)});
  });
}

qt_status qt_instance_from_json(const char* text, qt_instance** out) {
  return guard([&] {
    need(out, "output pointer");
    *out = make_handle(qt_instance{csp::lin_from_json(parse(text, "instance"))});
  });
}

void qt_instance_free(qt_instance* inst) { delete inst; }

qt_status qt_instance_to_json(const qt_instance* inst, char** out) {
  return guard([&] {
    need(inst, "instance");
    emit(out, csp::to_json(inst->inst));
  });
}

qt_status qt_instance_size(const qt_instance* inst, uint64_t* variables, uint64_t* constraints, size_t* arity) {
  return guard([&] {
    need(inst, "instance");
    if (variables) *variables = inst->inst.m;
    if (constraints) *constraints = inst->inst.n();
    if (arity) *arity = inst->inst.arity;
  });
}

qt_status qt_csp_unsat(const qt_instance* inst, char** out) {
  return guard([&] {
    need(inst, "instance");
    emit(out, csp::to_json(csp::certify_unsat(inst->inst)));
  });
}

qt_status qt_csp_maxsat(const qt_instance* inst, const char* mode, uint64_t seed, uint64_t budget, size_t restarts,
                        double c1, char** out) {
  return guard([&] {
    need(inst, "instance");
    csp::SatOptions opts;
    opts.budget = budget;
    if (restarts) opts.restarts = restarts;
    if (c1 >= 0) opts.c1 = c1;
    emit(out, csp::to_json(csp::max_sat(inst->inst, csp::sat_mode_from_string(mode ? mode : "exact"), seed, opts)));
  });
}

qt_status qt_csp_reduce3(const qt_instance* inst, int dimacs, char** out) {
  return guard([&] {
    need(inst, "instance");
    need(out, "output pointer");
    auto x = csp::reduce_to_3xor(inst->inst);
    *out = dup(dimacs ? csp::to_dimacs(x) : csp::to_json(x).dump());
  });
}

qt_status qt_csp_sos_bound(double c1, double c2, double m, double arity, double* out) {
  return guard([&] {
    need(out, "output pointer");
    *out = csp::sos_level_bound(c1, c2, m, arity);
  });
}

qt_status qt_oracle_from_code(const qt_code* code, qt_oracle** out) {
  return guard([&] {
    need(code, "code");
    need(out, "output pointer");
    *out = new qt_oracle{csp::ConstraintOracle(code->code.provenance)};
  });
}

void qt_oracle_free(qt_oracle* oracle) { delete oracle; }

qt_status qt_oracle_constraint(const qt_oracle* oracle, uint64_t index, char** out) {
  return guard([&] {
    need(oracle, "oracle");
    emit(out, csp::to_json(oracle->oracle.constraint(index)));
  });
}

qt_status qt_nlts_clusters(const qt_code* code, const char* basis, double eps, double c1, double c2, char** out) {
  return guard([&] {
    need(code, "code");
    auto part = nlts::build_clusters(
        nlts::enumerate_syndrome_set(code->code, nlts::basis_from_string(basis ? basis : "Z"), eps), c1);
    auto rep = nlts::verify_cluster_lemma(part, c2);
    emit(out, json{{"partition", nlts::to_json(part)}, {"lemma", nlts::to_json(rep)}});
  });
}

qt_status qt_nlts_hamiltonian(const qt_code* code, char** out) {
  return guard([&] {
    need(code, "code");
    auto ham = nlts::build_code_hamiltonian(code->code);
    emit(out, nlts::to_json(nlts::check_sector_law(code->code, ham)));
  });
}

qt_status qt_nlts_spread(const qt_code* code, const char* state_json, size_t trials, double eps, double c1,
                         uint64_t seed, char** out) {
  return guard([&] {
    need(code, "code");
    const auto& c = code->code;
    auto px = nlts::build_clusters(nlts::enumerate_syndrome_set(c, nlts::Basis::x, eps), c1);
    auto pz = nlts::build_clusters(nlts::enumerate_syndrome_set(c, nlts::Basis::z, eps), c1);
    auto lg = nlts::find_logicals(c);
    json j = {{"eps", eps}, {"c1", c1}, {"mu_prime", nlts::kMuPrime}};
    if (state_json) {
      auto state = nlts::state_from_json(parse(state_json, "state"));
      j["report"] = nlts::to_json(nlts::measure_spread(state, px, pz, lg));
    } else {
      Rng rng(seed);
      std::size_t dichotomy = 0, in_sector = 0;
      double worst = 1;
      for (std::size_t t = 0; t < trials; ++t) {
        auto r = nlts::measure_spread(nlts::random_sector_state(c, eps, rng), px, pz, lg);
        dichotomy += r.dichotomy;
        in_sector += r.in_sector;
        worst = std::min(worst, std::max(std::min(r.x.mass0, r.x.mass1), std::min(r.z.mass0, r.z.mass1)));
      }
      j["trials"] = trials;
      j["dichotomy"] = dichotomy;
      j["in_sector"] = in_sector;
      j["worst_best_basis_mass"] = worst;
    }
    emit(out, j);
  });
}

qt_status qt_nlts_depth_bound(double n, double mu, double delta, double* bound, double* nlts_bound) {
  return guard([&] {
    const double b = nlts::depth_lower_bound(n, mu, delta);
    if (bound) *bound = b;
    if (nlts_bound) *nlts_bound = b + 1;
  });
}

qt_status qt_nlts_epsilon_threshold(double eps0, double c1, double c2, double relative_distance, double* eps,
                                    double* eps_prime) {
  return guard([&] {
    auto t = nlts::epsilon_threshold(eps0, c1, c2, relative_distance);
    if (eps) *eps = t.epsilon;
    if (eps_prime) *eps_prime = t.epsilon_prime;
  });
}

qt_status qt_nlts_clustering_from_ssexp(double c1p, double c2p, double* c1, double* c2, double* eps0) {
  return guard([&] {
    auto k = nlts::clustering_from_ssexp(c1p, c2p);
    if (c1) *c1 = k.c1;
    if (c2) *c2 = k.c2;
    if (eps0) *eps0 = k.eps0;
  });
}

qt_status qt_config_normalize(const char* config_json, const char* overrides_json, char** out) {
  return guard([&] {
    auto c = pipeline::config_from_json(parse(config_json, "config"),
                                        overrides_json ? parse(overrides_json, "overrides") : json::object());
    pipeline::precheck(c);
    emit(out, pipeline::to_json(c));
  });
}

qt_status qt_pipeline_run(const char* config_json, const char* overrides_json, char** out) {
  return guard([&] {
    auto c = pipeline::config_from_json(parse(config_json, "config"),
                                        overrides_json ? parse(overrides_json, "overrides") : json::object());
    emit(out, pipeline::run_pipeline(c));
  });
}

qt_status qt_pipeline_report(const char* manifest_path, char** out) {
  return guard([&] {
    need(manifest_path, "manifest path");
    need(out, "output pointer");
    *out = dup(pipeline::report(pipeline::load_manifest(manifest_path)));
  });
}

}  // extern "C"
