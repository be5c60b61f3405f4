/* C interface to the ergolin library. All strings are UTF-8 and NUL-terminated.
 * Functions returning int use the codes below; on failure ergolin_last_error() describes the cause. */
#ifndef ERGOLIN_H
#define ERGOLIN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ERGOLIN_API __declspec(dllexport)
#else
#define ERGOLIN_API __attribute__((visibility("default")))
#endif

enum {
  ERGOLIN_OK = 0,
  ERGOLIN_SUITE_FAILED = 1,
  ERGOLIN_ERR_CONFIG = 2, /* also precondition, size and unsupported input */
  ERGOLIN_ERR_PRECISION = 3,
  ERGOLIN_ERR_INTERNAL = 4, /* internal inconsistency or exhausted horizon */
  ERGOLIN_ERR_ARGUMENT = 5  /* null handle or out-of-range index */
};

typedef struct ergolin_result ergolin_result;
typedef struct ergolin_cf ergolin_cf;
typedef struct ergolin_hardy ergolin_hardy;

ERGOLIN_API const char* ergolin_version(void);
/* Message for the last failing call on this thread; empty when none. */
ERGOLIN_API const char* ergolin_last_error(void);
/* JSON description of every command, action and config key. */
ERGOLIN_API const char* ergolin_schema_json(void);

/* Runs one command. kv_text uses the config file format ("key = value" lines, later lines win).
 * action may be NULL for the default. *result is always set and must be freed; the return value
 * equals ergolin_result_exit_code(*result). */
ERGOLIN_API int ergolin_run(const char* command, const char* action, const char* kv_text, ergolin_result** result);
ERGOLIN_API int ergolin_result_exit_code(const ergolin_result* r);
ERGOLIN_API const char* ergolin_result_output(const ergolin_result* r);
ERGOLIN_API const char* ergolin_result_error(const ergolin_result* r);
ERGOLIN_API size_t ergolin_result_file_count(const ergolin_result* r);
ERGOLIN_API const char* ergolin_result_file(const ergolin_result* r, size_t i);
ERGOLIN_API void ergolin_result_free(ergolin_result* r);

/* Continued fraction of alpha (same syntax as the alpha key). */
ERGOLIN_API int ergolin_cf_new(const char* alpha, size_t depth, ergolin_cf** out);
ERGOLIN_API size_t ergolin_cf_depth(const ergolin_cf* cf);
/* Decimal string of a_j (1-based) or q_k (0-based); NULL on a bad index. Valid until the handle is freed. */
ERGOLIN_API const char* ergolin_cf_quotient(const ergolin_cf* cf, size_t j);
ERGOLIN_API const char* ergolin_cf_denominator(const ergolin_cf* cf, size_t k);
ERGOLIN_API void ergolin_cf_free(ergolin_cf* cf);

/* A built-in symbol pair under the doubling map with A1 = [0,1/2). */
ERGOLIN_API int ergolin_hardy_new(const char* pair, size_t N, ergolin_hardy** out);
/* Verdict name, valid until the handle is freed. */
ERGOLIN_API int ergolin_hardy_classify(ergolin_hardy* h, const char** verdict);
/* log ||T_n|| for the product with a1 and a2 factors. */
ERGOLIN_API int ergolin_hardy_log_norm(const ergolin_hardy* h, uint64_t a1, uint64_t a2, double* out);
ERGOLIN_API void ergolin_hardy_free(ergolin_hardy* h);

#ifdef __cplusplus
}
#endif

#endif
