#ifndef CARTAN_CARTAN_H
#define CARTAN_CARTAN_H

/* C interface to the cartan toolkit: Bergman geometry of the classical
 * domains and composition-operator diagnostics.
 *
 * All functions return a cartan_status; on failure cartan_last_error() holds
 * a message for the calling thread. Vectors are intrinsic coordinates of
 * length cartan_domain_dimension(); matrices are row-major. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CARTAN_BUILDING_LIBRARY)
#    define CARTAN_API __declspec(dllexport)
#  else
#    define CARTAN_API __declspec(dllimport)
#  endif
#else
#  define CARTAN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cartan_status {
  CARTAN_OK = 0,
  CARTAN_INVALID_ARGUMENT = 1,
  CARTAN_OUTSIDE_DOMAIN = 2,
  CARTAN_CONDITIONING = 3,
  CARTAN_PARSE_ERROR = 4,
  CARTAN_CHECK_FAILED = 5,
  CARTAN_INTERNAL = 6
} cartan_status;

typedef struct cartan_complex {
  double re;
  double im;
} cartan_complex;

typedef struct cartan_domain cartan_domain;
typedef struct cartan_map cartan_map;
typedef struct cartan_report cartan_report;

typedef enum cartan_format { CARTAN_FORMAT_JSON = 0, CARTAN_FORMAT_CSV = 1 } cartan_format;

typedef struct cartan_run_options {
  int has_seed;
  uint64_t seed;
  int has_samples;
  size_t samples;
  size_t workers; /* 0 is treated as 1 */
  cartan_format format;
} cartan_run_options;

CARTAN_API const char* cartan_version(void);
CARTAN_API const char* cartan_last_error(void);
CARTAN_API const char* cartan_status_string(cartan_status status);

/* Domains, from the JSON descriptor {"kind": "I", "m": 2, "n": 3} etc. */
CARTAN_API cartan_status cartan_domain_parse(const char* json, cartan_domain** out);
CARTAN_API void cartan_domain_free(cartan_domain* d);
CARTAN_API cartan_status cartan_domain_dimension(const cartan_domain* d, size_t* out);
CARTAN_API cartan_status cartan_domain_contains(const cartan_domain* d, const cartan_complex* z, int* out);
CARTAN_API cartan_status cartan_domain_boundary_distance(const cartan_domain* d, const cartan_complex* z,
                                                         double* out);

/* Metric. `gram` receives dim*dim entries. */
CARTAN_API cartan_status cartan_metric_matrix(const cartan_domain* d, const cartan_complex* z, cartan_complex* gram);
CARTAN_API cartan_status cartan_bergman_form(const cartan_domain* d, const cartan_complex* z,
                                             const cartan_complex* u, double* out);
/* sup_v |grad . v|^2 / H_z(v, v). */
CARTAN_API cartan_status cartan_rayleigh_sup(const cartan_domain* d, const cartan_complex* z,
                                             const cartan_complex* grad, double* out);

/* Maps, from {"family": ..., "params": {...}, "children": [...]} on `d`. */
CARTAN_API cartan_status cartan_map_parse(const cartan_domain* d, const char* json, cartan_map** out);
CARTAN_API void cartan_map_free(cartan_map* m);
CARTAN_API cartan_status cartan_map_evaluate(const cartan_map* m, const cartan_complex* z, cartan_complex* out);
/* out[l*dim + k] = d phi_l / d z_k. */
CARTAN_API cartan_status cartan_map_jacobian(const cartan_map* m, const cartan_complex* z, cartan_complex* out);
/* `direction` may be NULL. */
CARTAN_API cartan_status cartan_distortion_ratio(const cartan_map* m, const cartan_complex* z, double* ratio,
                                                 cartan_complex* direction);

/* Subcommands: "metric", "check-identities", "ratio-profile", "testfn",
 * "sequence-probe". A report is produced even when the command fails; its
 * exit code follows the CLI convention (0 ok, 1 failed check, 2 input
 * error). `options` may be NULL. */
CARTAN_API cartan_status cartan_run(const char* command, const char* config_json, const cartan_run_options* options,
                                    cartan_report** out);
CARTAN_API const char* cartan_report_text(const cartan_report* r);
CARTAN_API const char* cartan_report_error(const cartan_report* r);
CARTAN_API int cartan_report_exit_code(const cartan_report* r);
CARTAN_API void cartan_report_free(cartan_report* r);

#ifdef __cplusplus
}
#endif

#endif
