/* C interface to the coherent beat laser model. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * cbl_string_free. Errors are reported as status codes; the message of the
 * most recent failure on the calling thread is available from
 * cbl_last_error. */
#ifndef CBL_CBL_H
#define CBL_CBL_H

#include <stddef.h>

#if defined(_WIN32)
#define CBL_API __declspec(dllexport)
#else
#define CBL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cbl_status {
  CBL_OK = 0,
  CBL_ERR_DOMAIN = 1,
  CBL_ERR_THRESHOLD = 2,
  CBL_ERR_REPRESENTABILITY = 3,
  CBL_ERR_STEP_SIZE = 4,
  CBL_ERR_DIMENSION = 5,
  CBL_ERR_TRUNCATION = 6,
  CBL_ERR_CONVERGENCE = 7,
  CBL_ERR_SPEC = 8,
  CBL_ERR_IO = 9,
  CBL_ERR_NULL_ARG = 10,
  CBL_ERR_INTERNAL = 11
} cbl_status;

typedef enum cbl_scope { CBL_SCOPE_LANGEVIN = 0, CBL_SCOPE_MASTER = 1, CBL_SCOPE_ALL = 2 } cbl_scope;

typedef enum cbl_profile { CBL_PROFILE_DEFAULT = 0, CBL_PROFILE_STRICT = 1 } cbl_profile;

typedef struct cbl_params cbl_params;
typedef struct cbl_sweep cbl_sweep;

typedef struct cbl_observables {
  int below_threshold;
  int near_threshold;
  double lambda_plus;
  double lambda_minus;
  /* Only meaningful when below_threshold is nonzero. */
  double var_plus_cav;
  double var_minus_cav;
  double var_plus_out;
  double var_minus_out;
  double n_cav;
  double n_out;
  double squeeze_pct_cav;
  double squeeze_pct_out;
} cbl_observables;

CBL_API const char* cbl_status_message(cbl_status status);
CBL_API const char* cbl_last_error(void);
CBL_API void cbl_string_free(char* s);

CBL_API cbl_status cbl_params_create(double linear_gain, double kappa, double eta, double drive,
                                     double noise, cbl_params** out);
CBL_API void cbl_params_destroy(cbl_params* p);

CBL_API cbl_status cbl_evaluate(const cbl_params* p, cbl_observables* out);
CBL_API cbl_status cbl_eval_json(const cbl_params* p, char** out);

/* Sweep specification. Parameter names: A, kappa, eta, omega, N. Outputs is
 * a comma-separated list of observable names. */
CBL_API cbl_status cbl_sweep_create(cbl_sweep** out);
CBL_API cbl_status cbl_sweep_from_json(const char* json, cbl_sweep** out);
CBL_API void cbl_sweep_destroy(cbl_sweep* s);
CBL_API cbl_status cbl_sweep_set_fixed(cbl_sweep* s, const char* name, double value);
/* CBL_ERR_SPEC if the parameter has no fixed value. */
CBL_API cbl_status cbl_sweep_get_fixed(const cbl_sweep* s, const char* name, double* value);
CBL_API cbl_status cbl_sweep_set_axis(cbl_sweep* s, const char* name, double start, double stop,
                                      double step);
CBL_API cbl_status cbl_sweep_set_outputs(cbl_sweep* s, const char* outputs);
CBL_API cbl_status cbl_sweep_run_csv(const cbl_sweep* s, char** out);

/* Figure presets fig2 .. fig7 as CSV. */
CBL_API cbl_status cbl_figure_csv(const char* name, char** out);
CBL_API cbl_status cbl_figure_names(char** out);

CBL_API cbl_status cbl_verify(cbl_scope scope, cbl_profile profile, char** report, int* passed);
CBL_API cbl_status cbl_consistency_report(char** out);

#ifdef __cplusplus
}
#endif

#endif
