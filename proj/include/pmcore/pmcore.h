/*
 * pmcore C API.
 *
 * Every call copies its inputs before returning; no pointer passed in is
 * retained. Text results and error documents are heap strings owned by the
 * caller and must be released with pmcore_string_free().
 *
 * Failing calls return a non-zero status and, when an out-pointer was
 * supplied, store {"error":"<StatusName>","detail":"..."} in it.
 */
#ifndef PMCORE_H
#define PMCORE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32) || defined(__CYGWIN__)
#  if defined(pmcore_EXPORTS)
#    define PMCORE_API __declspec(dllexport)
#  else
#    define PMCORE_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) && (__GNUC__ >= 4)
#  define PMCORE_API __attribute__((visibility("default")))
#else
#  define PMCORE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef uint64_t pmcore_log_handle;

typedef enum pmcore_status {
  PMCORE_OK = 0,
  PMCORE_ERR_LABEL_COLLISION = 1,
  PMCORE_ERR_MALFORMED_XML = 2,
  PMCORE_ERR_INVALID_ATTRIBUTE = 3,
  PMCORE_ERR_DEPTH_EXCEEDED = 4,
  PMCORE_ERR_NOT_GZIP = 5,
  PMCORE_ERR_CORRUPT_ARCHIVE = 6,
  PMCORE_ERR_IO = 7,
  PMCORE_ERR_UNKNOWN_PLACE = 8,
  PMCORE_ERR_UNKNOWN_TRANSITION = 9,
  PMCORE_ERR_NOT_ENABLED = 10,
  PMCORE_ERR_SCHEMA_VIOLATION = 11,
  PMCORE_ERR_INVARIANT_VIOLATION = 12,
  PMCORE_ERR_PARSE_ERROR = 13,
  PMCORE_ERR_INVALID_LABEL = 14,
  PMCORE_ERR_INVALID_CONFIG = 15,
  PMCORE_ERR_UNKNOWN_HANDLE = 16,
  PMCORE_ERR_DOUBLE_DESTROY = 17,
  PMCORE_ERR_INVALID_ARGUMENT = 18,
  PMCORE_ERR_INTERNAL = 19
} pmcore_status;

PMCORE_API const char* pmcore_version(void);

/* Name used in the "error" field of error documents, e.g. "ParseError". */
PMCORE_API const char* pmcore_status_name(pmcore_status status);

PMCORE_API void pmcore_string_free(char* s);

/* ---- event logs (handle based) ---------------------------------------- */

/* Parses an XES file (plain or gzip, detected by magic bytes). */
PMCORE_API pmcore_status pmcore_load_log(const char* path, pmcore_log_handle* handle,
                                         char** error);

/* Same from an in-memory buffer; the bytes are copied during the call. */
PMCORE_API pmcore_status pmcore_load_log_bytes(const uint8_t* data, size_t len,
                                               pmcore_log_handle* handle, char** error);

/* Releases a loaded log. A second destroy yields PMCORE_ERR_DOUBLE_DESTROY. */
PMCORE_API pmcore_status pmcore_destroy_log(pmcore_log_handle handle, char** error);

/* {"events":N,"activities":N,"cases":N,"variants":N} */
PMCORE_API pmcore_status pmcore_log_stats(pmcore_log_handle handle, char** out);

/* Projection JSON. classifier_keys_json is a JSON array of attribute keys,
 * or NULL for ["concept:name"]. */
PMCORE_API pmcore_status pmcore_log_projection(pmcore_log_handle handle,
                                               const char* classifier_keys_json, char** out);

/* Event table as "csv" or "json" (columnar). */
PMCORE_API pmcore_status pmcore_log_event_table(pmcore_log_handle handle, const char* format,
                                                char** out);

/* Log-level attributes, globals, extensions and classifiers as JSON. */
PMCORE_API pmcore_status pmcore_log_metadata(pmcore_log_handle handle, char** out);

/* Number of logs currently held. */
PMCORE_API size_t pmcore_live_log_count(void);

/* ---- discovery --------------------------------------------------------- */

/* Re-encodes a projection document after validating it. */
PMCORE_API pmcore_status pmcore_projection_normalize(const char* projection_json, char** out);

/* Alpha+++ on a projection document; out receives "pmcore-apn/1" JSON.
 * threads == 0 uses all hardware threads. */
PMCORE_API pmcore_status pmcore_discover(const char* projection_json, const char* variant,
                                         unsigned threads, char** out);

/* Alpha+++ on a loaded log. format is "json" or "pnml". When report is not
 * NULL it receives {"timings":{stage:seconds},"counts":{...}}. */
PMCORE_API pmcore_status pmcore_discover_log(pmcore_log_handle handle, const char* variant,
                                             unsigned threads, const char* format, char** out,
                                             char** report);

/* Converts "pmcore-apn/1" JSON to "json" (canonical) or "pnml". */
PMCORE_API pmcore_status pmcore_net_convert(const char* net_json, const char* format,
                                            char** out);

#ifdef __cplusplus
}
#endif

#endif /* PMCORE_H */
