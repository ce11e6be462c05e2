/* besselforge C API.
 *
 * Every function returns a bf_status; on failure bf_last_error() holds a
 * message for the calling thread until its next API call. Handles are opaque
 * and owned by the caller once returned; release them with the matching
 * *_free function. Strings returned by result accessors live as long as the
 * result handle.
 */
#ifndef BESSELFORGE_H
#define BESSELFORGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BESSELFORGE_BUILDING_LIBRARY)
#    define BF_API __declspec(dllexport)
#  else
#    define BF_API __declspec(dllimport)
#  endif
#else
#  define BF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bf_status {
  BF_OK = 0,
  BF_ERR_USAGE = 1,
  BF_ERR_DOMAIN = 2,
  BF_ERR_NUMERICAL = 4,
  BF_ERR_CONSTRUCTION = 5,
  BF_ERR_INTERNAL = 6
} bf_status;

typedef struct bf_grid bf_grid;
typedef struct bf_operator bf_operator;
typedef struct bf_config bf_config;
typedef struct bf_result bf_result;

BF_API const char* bf_version(void);
BF_API const char* bf_last_error(void);

/* Scalars */
BF_API bf_status bf_log_gamma(double x, double* out);
BF_API bf_status bf_jacobi_p(int degree, double alpha, double u, double* out);
BF_API bf_status bf_bessel_j(double nu, double x, double* out);
/* family: cd_u, hat, rescaled, bessel_tw, modified_bessel (n ignored by the last two) */
BF_API bf_status bf_kernel_eval(const char* family, int n, double s, double x1, double x2, double* out);
BF_API bf_status bf_heine_mehler_residual(int n, double alpha, double x, double* out);
BF_API bf_status bf_hellinger(int n, double s, double s2, double* hel, double* one_minus_hel);

/* Grids: "xmin:xmax:ppd:k" half-line grids */
BF_API bf_status bf_grid_parse(const char* spec, bf_grid** out);
BF_API size_t bf_grid_size(const bf_grid* grid);
BF_API bf_status bf_grid_node(const bf_grid* grid, size_t i, double* node, double* weight);
BF_API void bf_grid_free(bf_grid* grid);

/* Operators (weighted Nystrom matrices on a grid) */
BF_API bf_status bf_operator_discretize(const char* family, int n, double s, const bf_grid* grid,
                                        bf_operator** out);
BF_API bf_status bf_operator_weighted_projector(int n, double s, double beta, const bf_grid* grid,
                                                bf_operator** out);
BF_API bf_status bf_operator_limit_projector(double s, double beta, const bf_grid* grid,
                                             bf_operator** out);
BF_API size_t bf_operator_size(const bf_operator* op);
BF_API bf_status bf_operator_entry(const bf_operator* op, size_t i, size_t j, double* out);
BF_API bf_status bf_operator_trace(const bf_operator* op, double* out);
BF_API bf_status bf_operator_trace_norm(const bf_operator* op, double* out);
BF_API bf_status bf_operator_distance(const bf_operator* a, const bf_operator* b, double* out);
BF_API void bf_operator_free(bf_operator* op);

/* Experiments: kernel-eval, converge, tails, sample, hellinger, orbital */
BF_API bf_status bf_config_new(const char* command, bf_config** out);
/* key is a long option name without dashes, value its textual form */
BF_API bf_status bf_config_set(bf_config* cfg, const char* key, const char* value);
BF_API void bf_config_free(bf_config* cfg);
BF_API size_t bf_command_count(void);
BF_API const char* bf_command_name(size_t i);

BF_API bf_status bf_run(const bf_config* cfg, bf_result** out);
BF_API const char* bf_result_csv(const bf_result* r);
BF_API const char* bf_result_summary_json(const bf_result* r);
BF_API const char* bf_result_document_json(const bf_result* r);
/* NULL when the result has no attachment of that name (e.g. "samples") */
BF_API const char* bf_result_attachment(const bf_result* r, const char* name);
BF_API int bf_result_claims_hold(const bf_result* r);
BF_API void bf_result_free(bf_result* r);

#ifdef __cplusplus
}
#endif

#endif
