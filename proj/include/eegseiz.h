/* C API for the EEG seizure-analysis pipeline. All entry points are
 * thread-compatible; error details for the calling thread are available
 * via eegseiz_last_error(). Strings returned as char* are owned by the
 * caller and must be released with eegseiz_string_free(). */
#ifndef EEGSEIZ_H
#define EEGSEIZ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EEGSEIZ_API __declspec(dllexport)
#else
#define EEGSEIZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    EEGSEIZ_OK = 0,
    EEGSEIZ_ERR_PARSE = 1,        /* malformed input or config file */
    EEGSEIZ_ERR_DOMAIN = 2,       /* argument outside an operation's domain */
    EEGSEIZ_ERR_CONDITIONING = 3, /* singular / non-positive-definite matrix */
    EEGSEIZ_ERR_IO = 4,           /* filesystem failure */
    EEGSEIZ_ERR_PROCESSING = 5,   /* one or more batch items failed */
    EEGSEIZ_ERR_INTERNAL = 6
} eegseiz_status;

typedef enum { EEGSEIZ_FORMAT_CSV = 0, EEGSEIZ_FORMAT_RAW = 1 } eegseiz_format;

EEGSEIZ_API const char* eegseiz_version(void);

/* Message for the most recent failure on this thread; empty if none. */
EEGSEIZ_API const char* eegseiz_last_error(void);

EEGSEIZ_API void eegseiz_string_free(char* s);

/* ---- configuration ---- */

typedef struct eegseiz_config eegseiz_config;

EEGSEIZ_API eegseiz_config* eegseiz_config_default(void);
EEGSEIZ_API eegseiz_config* eegseiz_config_load(const char* path);
EEGSEIZ_API void eegseiz_config_free(eegseiz_config* config);

/* Keys mirror the config file: out_dir, seed, band (delta..gamma or the
 * empty string), classifier (eq6|pooled), aggregate (median|mean). */
EEGSEIZ_API eegseiz_status eegseiz_config_set(eegseiz_config* config, const char* key,
                                              const char* value);
EEGSEIZ_API char* eegseiz_config_to_json(const eegseiz_config* config);

/* ---- records ---- */

typedef struct eegseiz_record eegseiz_record;

EEGSEIZ_API eegseiz_record* eegseiz_record_read(const char* path, eegseiz_format format);
EEGSEIZ_API void eegseiz_record_free(eegseiz_record* record);
EEGSEIZ_API eegseiz_status eegseiz_record_info(const eegseiz_record* record,
                                               uint32_t* channels, uint64_t* samples,
                                               double* sample_rate_hz);

/* ---- batch pipeline commands (each writes manifest.json in out_dir) ---- */

/* Feature extraction; per-file failures are collected and reported via
 * eegseiz_last_error, with *failed_count set. Returns EEGSEIZ_OK only if
 * every input succeeded. */
EEGSEIZ_API eegseiz_status eegseiz_run_features(const eegseiz_config* config,
                                                const char* const* inputs, size_t count,
                                                size_t* failed_count);

EEGSEIZ_API eegseiz_status eegseiz_run_evaluate(const eegseiz_config* config,
                                                const char* const* feature_files,
                                                size_t count);

EEGSEIZ_API eegseiz_status eegseiz_run_correlate(const eegseiz_config* config,
                                                 const char* const* feature_files,
                                                 size_t count);

/* summary receives the human-readable report (free with eegseiz_string_free);
 * *all_passed is 1 when every check passed. corrupt_hook != 0 injects a
 * wavelet-coefficient fault so the reconstruction check must fail. */
EEGSEIZ_API eegseiz_status eegseiz_run_selftest(uint64_t seed, int corrupt_hook,
                                                char** summary, int* all_passed);

/* ---- numeric primitives ---- */

EEGSEIZ_API eegseiz_status eegseiz_ggd_pdf(double x, double scale_a, double shape_b,
                                           double* density);
EEGSEIZ_API eegseiz_status eegseiz_ggd_estimate(const double* samples, size_t count,
                                                double* scale_a, double* shape_b,
                                                int* iterations, int* converged);
EEGSEIZ_API eegseiz_status eegseiz_pearson_r(const double* x, const double* y,
                                             size_t count, double* r);
EEGSEIZ_API eegseiz_status eegseiz_pearson_p(double r, size_t count, double* p);
EEGSEIZ_API eegseiz_status eegseiz_fisher_ci95(double r, size_t count, double* ci_low,
                                               double* ci_high);

/* |H| at probe_hz for a Butterworth design; kind 0 = low-pass, 1 = high-pass. */
EEGSEIZ_API eegseiz_status eegseiz_butterworth_gain(int kind, int order, double cutoff_hz,
                                                    double sample_rate_hz, double probe_hz,
                                                    double* gain);

#ifdef __cplusplus
}
#endif

#endif /* EEGSEIZ_H */
