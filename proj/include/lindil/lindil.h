#ifndef LINDIL_LINDIL_H
#define LINDIL_LINDIL_H

/* C interface to the lindil planner. Every call returns a status code; on
 * failure lindil_last_error() holds a one-line message for the calling
 * thread. Strings returned through char** are owned by the caller and must
 * be released with lindil_string_free(). */

#include <stdint.h>

#if defined(_WIN32)
#if defined(LINDIL_BUILDING)
#define LINDIL_API __declspec(dllexport)
#else
#define LINDIL_API __declspec(dllimport)
#endif
#else
#define LINDIL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lindil_status {
  LINDIL_OK = 0,
  LINDIL_E_DOMAIN = 1,
  LINDIL_E_INFEASIBLE_EMBEDDING = 2,
  LINDIL_E_MISSING_DROPLET = 3,
  LINDIL_E_SUPPLY_EXHAUSTED = 4,
  LINDIL_E_INVARIANT = 5,
  LINDIL_E_PARSE = 6,
  LINDIL_E_ARGUMENT = 7,
  LINDIL_E_INTERNAL = 8
} lindil_status;

typedef struct lindil_gradient {
  int64_t a;     /* start numerator */
  int64_t d;     /* step numerator */
  uint32_t n;    /* scale: CFs are x / 2^n */
  int64_t count; /* number of targets S */
} lindil_gradient;

typedef struct lindil_policy {
  int surplus_as_waste; /* 0: surplus of a requested CF is an output */
  int direct_stock;     /* 1: boundary droplets supplied ready-made */
} lindil_policy;

typedef struct lindil_summary {
  int32_t order_g;
  int32_t embedded;
  int64_t m_total;
  int64_t m_gradient;
  int64_t m_engines;
  int64_t w_total;
  int64_t w_ldt;
  int64_t w_engines;
  int64_t peak_storage;
  int64_t storage_bound;
} lindil_summary;

typedef struct lindil_synthesis lindil_synthesis;
typedef struct lindil_simulation lindil_simulation;

LINDIL_API const char* lindil_last_error(void);
LINDIL_API const char* lindil_status_name(lindil_status status);
LINDIL_API void lindil_string_free(char* s);

/* Closed forms. */
LINDIL_API lindil_status lindil_predicted_mixes(int g, int64_t* out);
LINDIL_API lindil_status lindil_predicted_waste(int64_t count, int64_t* out);
LINDIL_API lindil_status lindil_boundary_demand(int g, int64_t* out);
LINDIL_API lindil_status lindil_copies_at_depth(int g, int depth, int64_t* out);

/* Plans the gradient and its boundary engines. policy may be NULL. */
LINDIL_API lindil_status lindil_synthesize(const lindil_gradient* spec, uint32_t accuracy,
                                           const lindil_policy* policy, lindil_synthesis** out);
LINDIL_API void lindil_synthesis_free(lindil_synthesis* s);
LINDIL_API lindil_status lindil_synthesis_summary(const lindil_synthesis* s, lindil_summary* out);
LINDIL_API lindil_status lindil_synthesis_json(const lindil_synthesis* s, char** out);

/* Replays a plan document produced by lindil_synthesis_json. */
LINDIL_API lindil_status lindil_simulate_json(const char* plan_json, lindil_simulation** out);
LINDIL_API void lindil_simulation_free(lindil_simulation* sim);
LINDIL_API lindil_status lindil_simulation_totals(const lindil_simulation* sim, int64_t* mixes,
                                                  int64_t* waste);
LINDIL_API lindil_status lindil_simulation_metrics_json(const lindil_simulation* sim, char** out);
LINDIL_API lindil_status lindil_simulation_trace_csv(const lindil_simulation* sim, char** out);

/* Experiments. */
LINDIL_API lindil_status lindil_table_csv(const lindil_policy* policy, char** out);
LINDIL_API lindil_status lindil_sweep_csv(uint64_t seed, const lindil_policy* policy, char** csv,
                                          char** summary_csv, int* gradient_exact);

/* Invariant suite. report gets one line per check; all_passed is 0 or 1. */
LINDIL_API lindil_status lindil_verify(int g_min, int g_max, int pruned_g_max, char** report,
                                       int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
