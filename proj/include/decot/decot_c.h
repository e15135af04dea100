#ifndef DECOT_DECOT_C_H
#define DECOT_DECOT_C_H

/*
 * C API for the decot pipeline library.
 *
 * All state lives behind an opaque decot_context created from an optional
 * config file and adjusted through string options. Values cross the boundary
 * as canonical JSON records (the same schema the run files use) or as file
 * paths; every function returns a decot_status and leaves a human-readable
 * message in thread-local storage retrievable via decot_last_error().
 *
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with decot_string_free().
 */

#include <stddef.h>

#if defined(_WIN32)
#if defined(DECOT_BUILD_SHARED)
#define DECOT_API __declspec(dllexport)
#else
#define DECOT_API __declspec(dllimport)
#endif
#else
#define DECOT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct decot_context decot_context;

typedef enum decot_status {
  DECOT_OK = 0,
  DECOT_E_INVALID_ARGUMENT = 1,
  DECOT_E_PARSE = 2,
  DECOT_E_VALIDATION = 3,
  DECOT_E_FORMAT = 4,
  DECOT_E_CONFIG = 5,
  DECOT_E_EMPTY_INPUT = 6,
  DECOT_E_BACKEND = 7,
  DECOT_E_AUTH = 8,
  DECOT_E_IO = 9,
  DECOT_E_INTERNAL = 10
} decot_status;

DECOT_API const char* decot_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
DECOT_API const char* decot_last_error(void);

DECOT_API void decot_string_free(char* s);

/* config_path may be NULL for built-in defaults. */
DECOT_API decot_status decot_context_create(const char* config_path, decot_context** out_ctx);
DECOT_API decot_status decot_context_set_option(decot_context* ctx, const char* key,
                                                const char* value);
DECOT_API void decot_context_destroy(decot_context* ctx);

/* Corpus file -> JSON array of instruction records. */
DECOT_API decot_status decot_ingest_corpus(decot_context* ctx, const char* corpus_path,
                                           char** out_json);

/* instruction record -> decomposition record */
DECOT_API decot_status decot_decompose(decot_context* ctx, const char* instruction_json,
                                       char** out_json);
/* decomposition record -> decomposition record (enhancement pass) */
DECOT_API decot_status decot_enhance(decot_context* ctx, const char* decomposition_json,
                                     char** out_json);
/* decomposition record -> prompt plan record */
DECOT_API decot_status decot_plan(decot_context* ctx, const char* decomposition_json,
                                  char** out_json);
/* prompt plan record -> generation trace record */
DECOT_API decot_status decot_generate(decot_context* ctx, const char* plan_json,
                                      char** out_json);
/* trace + decomposition + instruction -> evaluation record */
DECOT_API decot_status decot_judge(decot_context* ctx, const char* trace_json,
                                   const char* decomposition_json,
                                   const char* instruction_json, char** out_json);
/* instruction record -> "simple" | "medium" | "complex" */
DECOT_API decot_status decot_classify(decot_context* ctx, const char* instruction_json,
                                      char** out_level);

/* Runs the corpus, appending one run-record line per instruction to out_path.
 * Returns DECOT_OK even when individual instructions fail; the summary JSON
 * carries {"records": n, "failures": k}. */
DECOT_API decot_status decot_run(decot_context* ctx, const char* corpus_path,
                                 const char* out_path, char** out_summary_json);

/* Aggregates run files into an aligned table (one row per label). When
 * corpus_path is non-NULL a complexity-bucket table is appended. When
 * machine_out_path is non-NULL, one aggregate-row JSON object per label is
 * written there. */
DECOT_API decot_status decot_report(decot_context* ctx, const char* const* run_paths,
                                    size_t run_path_count, const char* corpus_path,
                                    const char* machine_out_path, char** out_table);

/* Runs the standard ablation rows (baseline, no-enhancement, no-adaptive,
 * full; plus strategy rows when include_strategy_rows != 0) over the corpus
 * and renders the comparison table. */
DECOT_API decot_status decot_ablate(decot_context* ctx, const char* corpus_path,
                                    int include_strategy_rows, const char* machine_out_path,
                                    char** out_table);

#ifdef __cplusplus
}
#endif

#endif /* DECOT_DECOT_C_H */
