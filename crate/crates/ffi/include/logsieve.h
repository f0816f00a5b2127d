#ifndef LOGSIEVE_H
#define LOGSIEVE_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LsStatus {
  LS_STATUS_OK = 0,
  LS_STATUS_NULL_ARGUMENT = 1,
  LS_STATUS_INVALID_UTF8 = 2,
  LS_STATUS_FORMAT_ERROR = 3,
  LS_STATUS_CONFIG_ERROR = 4,
  LS_STATUS_IO_ERROR = 5,
  LS_STATUS_NO_MATCH = 6,
  LS_STATUS_INVALID_ARGUMENT = 7,
  LS_STATUS_PANIC = 8,
} LsStatus;

/**
 * Result of scoring one log.
 */
typedef struct LsAnalysis LsAnalysis;

/**
 * Compiled log format template.
 */
typedef struct LsFormat LsFormat;

/**
 * One parsed line. Optional fields are -1 when absent.
 */
typedef struct LsRecord {
  /**
   * Face-value seconds since 1970-01-01 00:00:00.
   */
  int64_t timestamp;
  /**
   * IPv4 address, most significant octet first.
   */
  uint32_t ip;
  int32_t status;
  int64_t bytes;
} LsRecord;

/**
 * Policy thresholds; see [`ls_params_default`].
 */
typedef struct LsParams {
  uint32_t min_ip_b;
  uint32_t min_ip_c;
  uint32_t max_ip_c;
  uint32_t max_robot;
  uint32_t max_daily;
  uint32_t max_daily_range;
  uint32_t max_consec_days;
  uint32_t max_consec_range;
  uint32_t max_daily_ave;
  uint32_t max_daily_ppm;
} LsParams;

/**
 * One row of the stage table. `name` is a static string.
 */
typedef struct LsStageRow {
  const char *name;
  double workload;
  double stage_pct;
  double cumulative_pct;
} LsStageRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ls_last_error(void);

/**
 * Compile a format template such as the combined log format.
 *
 * # Safety
 * `template` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LsStatus ls_format_compile(const char *template_, struct LsFormat **out);

/**
 * The built-in combined log format template, as a static string.
 */
const char *ls_combined_log_format(void);

/**
 * # Safety
 * `format` must come from [`ls_format_compile`] or be null.
 */
void ls_format_free(struct LsFormat *format);

/**
 * Parse one line. Returns `LS_STATUS_NO_MATCH` when the line does not fit
 * the template.
 *
 * # Safety
 * Pointers must be valid; `line` NUL-terminated.
 */
enum LsStatus ls_parse_line(const struct LsFormat *format, const char *line, struct LsRecord *out);

struct LsParams ls_params_default(void);

/**
 * Score an in-memory log. `params` may be null for the defaults.
 *
 * # Safety
 * `data` must point to `len` readable bytes; other pointers must be valid.
 */
enum LsStatus ls_analyze_buffer(const struct LsFormat *format,
                                const uint8_t *data,
                                size_t len,
                                const struct LsParams *params,
                                uint32_t ds,
                                struct LsAnalysis **out);

/**
 * Score a log file. `params` may be null for the defaults.
 *
 * # Safety
 * Pointers must be valid; `path` NUL-terminated.
 */
enum LsStatus ls_analyze_file(const struct LsFormat *format,
                              const char *path,
                              const struct LsParams *params,
                              uint32_t ds,
                              struct LsAnalysis **out);

/**
 * # Safety
 * `analysis` must come from an `ls_analyze_*` call or be null.
 */
void ls_analysis_free(struct LsAnalysis *analysis);

/**
 * # Safety
 * `analysis` must be a valid handle.
 */
size_t ls_analysis_record_count(const struct LsAnalysis *analysis);

/**
 * # Safety
 * `analysis` must be a valid handle.
 */
size_t ls_analysis_skipped_count(const struct LsAnalysis *analysis);

/**
 * Number of records the pipeline blocks.
 *
 * # Safety
 * `analysis` must be a valid handle.
 */
size_t ls_analysis_blocked_count(const struct LsAnalysis *analysis);

/**
 * Blocklist text, one entry per line. Free with [`ls_string_free`].
 *
 * # Safety
 * `analysis` must be a valid handle.
 */
char *ls_analysis_blocklist(const struct LsAnalysis *analysis);

/**
 * Rows in the stage table: the unfiltered baseline plus one per stage.
 *
 * # Safety
 * `analysis` must be a valid handle.
 */
size_t ls_analysis_stage_count(const struct LsAnalysis *analysis);

/**
 * # Safety
 * `analysis` and `out` must be valid pointers.
 */
enum LsStatus ls_analysis_stage(const struct LsAnalysis *analysis,
                                size_t index,
                                struct LsStageRow *out);

/**
 * Write every analysis artifact into `dir`, creating it if needed.
 *
 * # Safety
 * Pointers must be valid; `dir` NUL-terminated.
 */
enum LsStatus ls_analysis_write(const struct LsAnalysis *analysis, const char *dir);

/**
 * Write a labeled synthetic corpus (`corpus.log`, `labels.csv`) into `dir`.
 * `regions` is a comma-separated list of region letters or `ALL`.
 *
 * # Safety
 * Strings must be NUL-terminated.
 */
enum LsStatus ls_synth_write(const char *regions, size_t humans, uint64_t seed, const char *dir);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void ls_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOGSIEVE_H */
