#ifndef COVERIFY_H
#define COVERIFY_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define COV_API __declspec(dllexport)
#else
#define COV_API __attribute__((visibility("default")))
#endif

typedef enum cov_status {
  COV_OK = 0,
  COV_ERR_DOMAIN = 1,
  COV_ERR_OVERFLOW = 2,
  COV_ERR_RESOURCE = 3,
  COV_ERR_VERIFICATION = 4,
  COV_ERR_PARSE = 5,
  COV_ERR_VALIDATION = 6,
  COV_ERR_SIZE = 7,
  COV_ERR_PRECONDITION = 8,
  COV_ERR_DIVERGENCE = 9,
  COV_ERR_UNDECIDABLE = 10,
  COV_ERR_DECOMPOSITION = 11,
  COV_ERR_EMPTY_FIBER = 12,
  COV_ERR_TAIL_DIVERGENCE = 13,
  COV_ERR_IO = 14,
  COV_ERR_INVALID_ARGUMENT = 15,
  COV_ERR_INTERNAL = 16
} cov_status;

/* Report flags for cov_prove. */
#define COV_REPORT_TIMING 1u
#define COV_REPORT_ALL_BINS 2u

typedef struct cov_context cov_context;
typedef struct cov_system cov_system;

typedef void (*cov_progress_fn)(const char* stage, void* user);

COV_API const char* cov_version(void);
COV_API const char* cov_status_name(cov_status status);

/* Strings returned through char** are owned by the caller. */
COV_API void cov_string_free(char* s);

COV_API cov_status cov_context_new(cov_context** out);
COV_API void cov_context_free(cov_context* ctx);
/* Message of the last failing call on this context, never NULL. */
COV_API const char* cov_last_error(const cov_context* ctx);
COV_API cov_status cov_context_load_config(cov_context* ctx, const char* path);
COV_API cov_status cov_context_set_config_json(cov_context* ctx, const char* json);
COV_API cov_status cov_context_config_json(cov_context* ctx, char** json_out);
COV_API cov_status cov_context_set_cache_dir(cov_context* ctx, const char* dir);
COV_API cov_status cov_context_set_progress(cov_context* ctx, cov_progress_fn fn, void* user);

/* Full pipeline. *proved is 1 when every essential check holds. */
COV_API cov_status cov_prove(cov_context* ctx, unsigned flags, char** report_json, int* proved);
/* Re-evaluates a saved report. *consistent is 1 when the recorded verdict is confirmed. */
COV_API cov_status cov_recheck_report(cov_context* ctx, const char* report_json, char** summary_json,
                                      int* consistent);

/* Shearer chain over the primes 4 < p <= pmax. */
COV_API cov_status cov_stage1_shearer(cov_context* ctx, uint64_t pmax, char** json_out, int* holds);
/* Window statistics for stage 1, 2 or 3. *ok reports the uniform window bounds (always 1 for stage 1). */
COV_API cov_status cov_window_report(cov_context* ctx, int stage, char** json_out, int* ok);

COV_API cov_status cov_system_parse(cov_context* ctx, const char* text, cov_system** out);
COV_API cov_status cov_system_load(cov_context* ctx, const char* path, cov_system** out);
COV_API void cov_system_free(cov_system* sys);
/* Exact uncovered density as "p/q" (or "0"). */
COV_API cov_status cov_system_density(cov_context* ctx, const cov_system* sys, char** rational_out);
COV_API cov_status cov_system_max_bias(cov_context* ctx, const cov_system* sys, uint64_t n, char** rational_out);
/* Fixed-point certificate for the sieve instance of a system at radius M (decimal string). */
COV_API cov_status cov_lll_certificate(cov_context* ctx, const cov_system* sys, const char* M, int iterate,
                                       char** json_out, int* ok);

#ifdef __cplusplus
}
#endif

#endif
