#ifndef QTANNER_QTANNER_H
#define QTANNER_QTANNER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QT_API __declspec(dllexport)
#elif defined(QTANNER_BUILDING)
#define QT_API __attribute__((visibility("default")))
#else
#define QT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  QT_OK = 0,
  QT_ERR_INVALID_ARGUMENT = 1,
  QT_ERR_PRECONDITION = 2,
  QT_ERR_BUDGET_EXCEEDED = 3,
  QT_ERR_SEARCH_EXHAUSTED = 4,
  QT_ERR_CONVERGENCE = 5,
  QT_ERR_GENERATION = 6,
  QT_ERR_IO = 7,
  QT_ERR_INTERNAL = 8
} qt_status;

typedef struct qt_code qt_code;
typedef struct qt_instance qt_instance;
typedef struct qt_oracle qt_oracle;

/* Strings returned through char** are heap allocated; release them with
   qt_string_free. The last error message is per thread and valid until the
   next failing call on that thread. */
QT_API const char* qt_version(void);
QT_API const char* qt_last_error(void);
QT_API const char* qt_status_name(qt_status s);
QT_API void qt_string_free(char* s);

QT_API void qt_set_enumeration_budget(uint64_t budget);
QT_API uint64_t qt_enumeration_budget(void);

/* expander */
QT_API qt_status qt_expander_generators(uint32_t p, uint32_t m, size_t degree, uint64_t seed, int best_effort,
                                        char** out_json);
QT_API qt_status qt_expander_spectrum(const char* generators_json, int with_identity, char** out_json);
/* vertex indices are decimal strings so that orders beyond 2^64 work */
QT_API qt_status qt_expander_neighbor(const char* generators_json, const char* vertex, size_t gen, char** out_vertex);
QT_API qt_status qt_expander_group_check(uint32_t p, uint32_t m, char** out_json);

/* inner codes */
QT_API qt_status qt_inner_search(uint32_t p, size_t delta, size_t k_a, size_t k_b, double rho, size_t budget,
                                 uint64_t seed, char** out_json);
QT_API qt_status qt_inner_expansion(const char* pair_json, char** out_json);
QT_API qt_status qt_entropy(double x, uint32_t q, double* out);
QT_API qt_status qt_entropy_inverse(double y, uint32_t q, double* out);

/* codes */
QT_API qt_status qt_code_build(const char* generators_json, const char* pair_json, const char* convention, qt_code** out);
QT_API qt_status qt_code_from_json(const char* json, qt_code** out);
QT_API qt_status qt_code_toy(const char* name, qt_code** out);
QT_API void qt_code_free(qt_code* code);
QT_API qt_status qt_code_to_json(const qt_code* code, char** out_json);
QT_API qt_status qt_code_info(const qt_code* code, size_t* n, size_t* m_x, size_t* m_z, size_t* locality);
QT_API qt_status qt_code_alist(const qt_code* code, char which, char** out_text);
QT_API qt_status qt_code_verify(const qt_code* code, char** out_json);
QT_API qt_status qt_code_dimension(const qt_code* code, char** out_json);
QT_API qt_status qt_code_distance(const qt_code* code, size_t trials, uint64_t seed, char** out_json);
QT_API qt_status qt_code_ssexp(const qt_code* code, const double* eps, size_t count, size_t trials, uint64_t seed,
                               char** out_json);

/* sos-csp; beta is "one" or a JSON vector */
QT_API qt_status qt_csp_emit(const qt_code* code, const char* beta, qt_instance** out);
QT_API qt_status qt_instance_from_json(const char* json, qt_instance** out);
QT_API void qt_instance_free(qt_instance* inst);
QT_API qt_status qt_instance_to_json(const qt_instance* inst, char** out_json);
QT_API qt_status qt_instance_size(const qt_instance* inst, uint64_t* variables, uint64_t* constraints, size_t* arity);
QT_API qt_status qt_csp_unsat(const qt_instance* inst, char** out_json);
/* mode is "exact" or "ls"; budget 0 uses the global budget; c1 < 0 means none */
QT_API qt_status qt_csp_maxsat(const qt_instance* inst, const char* mode, uint64_t seed, uint64_t budget,
                               size_t restarts, double c1, char** out_json);
QT_API qt_status qt_csp_reduce3(const qt_instance* inst, int dimacs, char** out);
QT_API qt_status qt_csp_sos_bound(double c1, double c2, double m, double arity, double* out);

QT_API qt_status qt_oracle_from_code(const qt_code* code, qt_oracle** out);
QT_API void qt_oracle_free(qt_oracle* oracle);
QT_API qt_status qt_oracle_constraint(const qt_oracle* oracle, uint64_t index, char** out_json);

/* nlts lab; basis is "X" or "Z" */
QT_API qt_status qt_nlts_clusters(const qt_code* code, const char* basis, double eps, double c1, double c2,
                                  char** out_json);
QT_API qt_status qt_nlts_hamiltonian(const qt_code* code, char** out_json);
/* state_json NULL samples `trials` random states from the eps sector */
QT_API qt_status qt_nlts_spread(const qt_code* code, const char* state_json, size_t trials, double eps, double c1,
                                uint64_t seed, char** out_json);
QT_API qt_status qt_nlts_depth_bound(double n, double mu, double delta, double* bound, double* nlts_bound);
QT_API qt_status qt_nlts_epsilon_threshold(double eps0, double c1, double c2, double relative_distance, double* eps,
                                           double* eps_prime);
QT_API qt_status qt_nlts_clustering_from_ssexp(double c1p, double c2p, double* c1, double* c2, double* eps0);

/* pipeline; overrides_json may be NULL */
QT_API qt_status qt_config_normalize(const char* config_json, const char* overrides_json, char** out_json);
QT_API qt_status qt_pipeline_run(const char* config_json, const char* overrides_json, char** out_manifest);
QT_API qt_status qt_pipeline_report(const char* manifest_path, char** out_text);

#ifdef __cplusplus
}
#endif

#endif
