#ifndef POLARITY_POLARITY_H
#define POLARITY_POLARITY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(POLARITY_BUILDING_LIBRARY)
#define POLARITY_API __declspec(dllexport)
#else
#define POLARITY_API __declspec(dllimport)
#endif
#else
#define POLARITY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum polarity_status {
  POLARITY_OK = 0,
  POLARITY_ERR_INVALID_ARGUMENT = 1,
  POLARITY_ERR_CONFIG_INVALID,
  POLARITY_ERR_DIMENSION_MISMATCH,
  POLARITY_ERR_BODY_NOT_CONTAINING_ORIGIN,
  POLARITY_ERR_UNBOUNDED_BODY,
  POLARITY_ERR_NON_SYMMETRIC_H_POLYTOPE,
  POLARITY_ERR_NON_SYMMETRIC_BODY,
  POLARITY_ERR_SAMPLE_BUDGET_TOO_SMALL,
  POLARITY_ERR_DEGENERATE_GENERATORS,
  POLARITY_ERR_NO_CONVERGENCE,
  POLARITY_ERR_EXPONENT_OUT_OF_RANGE,
  POLARITY_ERR_ZERO_WEIGHT,
  POLARITY_ERR_NOT_LOCALLY_INTEGRABLE,
  POLARITY_ERR_NON_INTEGRABLE_SINGULARITY,
  POLARITY_ERR_ZERO_MEASURE_CUBE,
  POLARITY_ERR_EMPTY_SAMPLING,
  POLARITY_ERR_CASE_MISMATCH,
  POLARITY_ERR_QUADRATURE_NOT_CONVERGED,
  POLARITY_ERR_GRID_DOMAIN_TOO_SMALL,
  POLARITY_ERR_ZERO_DENOMINATOR,
  POLARITY_ERR_DEGENERATE_INPUT,
  POLARITY_ERR_MANIFEST_MISMATCH,
  POLARITY_ERR_INTERNAL = 100
} polarity_status;

typedef struct polarity_body polarity_body;
typedef struct polarity_weight polarity_weight;

typedef struct polarity_estimate {
  double value;
  double abs_error; /* 3-sigma for Monte Carlo, 0 for exact */
  int exact;
  uint64_t samples;
  uint64_t seed;
} polarity_estimate;

POLARITY_API const char* polarity_version(void);
POLARITY_API const char* polarity_status_name(polarity_status status);
/* Message of the last failure on the calling thread. */
POLARITY_API const char* polarity_last_error(void);
/* Strings returned through char** out parameters are released with this. */
POLARITY_API void polarity_string_free(char* s);

/* Bodies use the JSON schema {"variant", "dim", ...} with an optional "shift". */
POLARITY_API polarity_status polarity_body_from_json(const char* json, polarity_body** out);
POLARITY_API polarity_status polarity_body_to_json(const polarity_body* body, char** out);
POLARITY_API void polarity_body_free(polarity_body* body);
POLARITY_API polarity_status polarity_body_dim(const polarity_body* body, int* out);
POLARITY_API polarity_status polarity_body_contains(const polarity_body* body, const double* x, int n, int* out);
POLARITY_API polarity_status polarity_body_polar(const polarity_body* body, polarity_body** out);
/* samples == 0 selects an exact method when one exists. */
POLARITY_API polarity_status polarity_body_volume(const polarity_body* body, uint64_t samples, uint64_t seed,
                                                  polarity_estimate* out);
POLARITY_API polarity_status polarity_mahler_volume(const polarity_body* body, uint64_t samples, uint64_t seed,
                                                    polarity_estimate* out);

/* dim is used for power weights without an explicit "dim" field. */
POLARITY_API polarity_status polarity_weight_from_json(const char* json, int dim, polarity_weight** out);
POLARITY_API polarity_status polarity_weight_to_json(const polarity_weight* w, char** out);
POLARITY_API void polarity_weight_free(polarity_weight* w);
POLARITY_API polarity_status polarity_weight_eval(const polarity_weight* w, const double* x, int n, double* out);
POLARITY_API polarity_status polarity_weight_integrate(const polarity_weight* w, const polarity_body* region,
                                                       uint64_t samples, uint64_t seed, polarity_estimate* out);

POLARITY_API polarity_status polarity_conjugate(double p, double* out);
POLARITY_API polarity_status polarity_epsilon_of_delta(double delta, double c, int n, double* out);

/* Commands, as a JSON array of names. */
POLARITY_API polarity_status polarity_commands(char** out);
/* Default tolerance table as a JSON object. */
POLARITY_API polarity_status polarity_tolerances(char** out);
/* Parses and validates a run configuration without computing. Failures
   return POLARITY_ERR_CONFIG_INVALID. */
POLARITY_API polarity_status polarity_validate(const char* command, const char* config_json, int has_seed_override,
                                               uint64_t seed_override);
/* Validates and runs a command. Validation failures return
   POLARITY_ERR_CONFIG_INVALID; numerical failures return the module's status.
   On success *result_json holds {"schema_version", "command", "seed",
   "report", "tables", "documents"}. */
POLARITY_API polarity_status polarity_run(const char* command, const char* config_json, int has_seed_override,
                                          uint64_t seed_override, char** result_json);

#ifdef __cplusplus
}
#endif

#endif
