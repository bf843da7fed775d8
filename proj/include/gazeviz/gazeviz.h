/*
 * gazeviz C API.
 *
 * All functions returning gv_status report failures through the status code and
 * a thread-local message available from gv_last_error(). Handles are opaque;
 * every create/open call has a matching release function. Strings returned
 * through char** out-parameters are owned by the caller and released with
 * gv_string_free().
 */
#ifndef GAZEVIZ_H
#define GAZEVIZ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GAZEVIZ_BUILDING_LIBRARY)
#    define GAZEVIZ_API __declspec(dllexport)
#  else
#    define GAZEVIZ_API __declspec(dllimport)
#  endif
#else
#  define GAZEVIZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gv_status {
    GV_OK = 0,
    GV_ERR_INVALID_ARGUMENT = 1,
    GV_ERR_IO = 2,
    GV_ERR_CORPUS = 3,
    GV_ERR_MALFORMED_FILENAME = 4,
    GV_ERR_UNPARSEABLE_RECORDING = 5,
    GV_ERR_SCHEMA = 6,
    GV_ERR_NO_STIMULUS = 7,
    GV_ERR_EMPTY_INPUT = 8,
    GV_ERR_EMPTY_CORPUS = 9,
    GV_ERR_FORMAT = 10,
    GV_ERR_NOT_FOUND = 11,
    GV_ERR_INTERNAL = 12
} gv_status;

typedef struct gv_dataset gv_dataset;
typedef struct gv_service gv_service;
typedef struct gv_response gv_response;

GAZEVIZ_API const char* gv_version(void);
GAZEVIZ_API const char* gv_status_name(gv_status status);
/* Message of the last failing call on this thread; "" when none. */
GAZEVIZ_API const char* gv_last_error(void);
GAZEVIZ_API void gv_string_free(char* s);

/* ---- preprocessing ---------------------------------------------------- */

typedef struct gv_preprocess_options {
    const char* input_dir;      /* required */
    const char* metadata_path;  /* optional */
    const char* output_path;    /* required, conventionally *.gaze.json */
    const char* windows;        /* comma list, e.g. "50,125,250"; presets "50","150","250" */
    const char* patterns_path;  /* optional stimulus pattern file */
    const char* extension;      /* recording extension, default ".tsv" */
    unsigned threads;           /* 0: hardware concurrency */
    int gzip_sibling;           /* non-zero: also write output_path + ".gz" */
} gv_preprocess_options;

GAZEVIZ_API void gv_preprocess_options_init(gv_preprocess_options* options);

/* Builds and writes the dataset. On success *report_json (if non-null)
 * receives a JSON summary including the build report. */
GAZEVIZ_API gv_status gv_preprocess(const gv_preprocess_options* options, char** report_json);

/* ---- datasets --------------------------------------------------------- */

GAZEVIZ_API gv_status gv_dataset_open(const char* path, gv_dataset** out);
GAZEVIZ_API void gv_dataset_close(gv_dataset* dataset);
GAZEVIZ_API gv_status gv_dataset_participant_count(const gv_dataset* dataset, size_t* out);
GAZEVIZ_API gv_status gv_dataset_stats(const gv_dataset* dataset, char** json_out);

/* ---- service ---------------------------------------------------------- */

typedef struct gv_service_options {
    const char* stimuli_dir;    /* optional */
    const char* static_dir;     /* optional dashboard bundle, mounted at "/" */
    const char* questions_path; /* optional JSON {stimulus: text} */
    int has_seed;
    uint64_t seed;
    int density_cell;           /* default cell size in px */
    double density_sigma;       /* default smoothing sigma in px */
} gv_service_options;

GAZEVIZ_API void gv_service_options_init(gv_service_options* options);

/* The service keeps its own reference to the dataset; the dataset handle may
 * be closed afterwards. */
GAZEVIZ_API gv_status gv_service_create(const gv_dataset* dataset, const gv_service_options* options,
                                        gv_service** out);
GAZEVIZ_API void gv_service_destroy(gv_service* service);

/* Runs one GET request, e.g. "/api/participants?language=java", in-process.
 * HTTP-level failures (4xx) are GV_OK with the status in the response. */
GAZEVIZ_API gv_status gv_service_request(const gv_service* service, const char* target, gv_response** out);

GAZEVIZ_API int gv_response_status(const gv_response* response);
GAZEVIZ_API const char* gv_response_content_type(const gv_response* response);
GAZEVIZ_API const char* gv_response_body(const gv_response* response, size_t* length);
/* NULL when the header is absent. */
GAZEVIZ_API const char* gv_response_header(const gv_response* response, const char* name);
GAZEVIZ_API void gv_response_free(gv_response* response);

/* port 0 picks a free port; the bound port is written to *bound_port. */
GAZEVIZ_API gv_status gv_service_bind(gv_service* service, const char* host, int port, int* bound_port);
/* Blocks until gv_service_stop() is called from another thread. */
GAZEVIZ_API gv_status gv_service_run(gv_service* service);
GAZEVIZ_API void gv_service_stop(gv_service* service);

#ifdef __cplusplus
}
#endif

#endif /* GAZEVIZ_H */
