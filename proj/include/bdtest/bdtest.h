#ifndef BDTEST_BDTEST_H
#define BDTEST_BDTEST_H

/* C interface to the bdtest library.
 *
 * Every call returns a bdt_status. On failure, bdt_last_error() returns a
 * message for the calling thread, valid until that thread's next call.
 * Strings returned through char** are owned by the caller and released with
 * bdt_string_free. Handles are released with their *_free function; passing
 * NULL to a *_free function is a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BDTEST_BUILDING_LIBRARY)
#    define BDT_API __declspec(dllexport)
#  else
#    define BDT_API __declspec(dllimport)
#  endif
#elif defined(BDTEST_BUILDING_LIBRARY)
#  define BDT_API __attribute__((visibility("default")))
#else
#  define BDT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bdt_status {
    BDT_OK = 0,
    BDT_ERR_ARGUMENT = 1,
    BDT_ERR_PARSE = 2,
    BDT_ERR_IO = 3,
    BDT_ERR_CAPACITY = 4,
    BDT_ERR_UNSUPPORTED = 5,
    BDT_ERR_DEGENERATE_RANGE = 6,
    BDT_ERR_PRECONDITION = 7,
    BDT_ERR_GENERATION = 8,
    BDT_ERR_INTERNAL = 9
} bdt_status;

typedef struct bdt_function bdt_function;
typedef struct bdt_bounds bdt_bounds;
typedef struct bdt_distribution bdt_distribution;

BDT_API const char* bdt_version(void);
BDT_API const char* bdt_status_name(bdt_status status);
BDT_API const char* bdt_last_error(void);
BDT_API void bdt_string_free(char* s);

/* Functions f : [n]^d -> [a, b]. Values are row-major, first coordinate most significant. */
BDT_API bdt_status bdt_function_load(const char* path, bdt_function** out);
BDT_API bdt_status bdt_function_parse(const char* text, bdt_function** out);
BDT_API bdt_status bdt_function_create(int n, int d, const double* values, double a, double b, bdt_function** out);
BDT_API void bdt_function_free(bdt_function* f);
BDT_API bdt_status bdt_function_info(const bdt_function* f, int* n, int* d, double* a, double* b);
/* coords holds d 1-based coordinates. */
BDT_API bdt_status bdt_function_value(const bdt_function* f, const int* coords, double* out);
BDT_API bdt_status bdt_function_to_text(const bdt_function* f, char** out);

/* Bounding families. spec is "monotone", "lipschitz:c", "const:l:u" or a bounds file path. */
BDT_API bdt_status bdt_bounds_load(const char* spec, int n, int d, bdt_bounds** out);
BDT_API bdt_status bdt_bounds_parse(const char* text, int n, int d, bdt_bounds** out);
/* lower and upper hold d rows of n-1 entries; +-INFINITY is allowed. */
BDT_API bdt_status bdt_bounds_create(int n, int d, const double* lower, const double* upper, bdt_bounds** out);
BDT_API void bdt_bounds_free(bdt_bounds* b);
BDT_API bdt_status bdt_bounds_to_text(const bdt_bounds* b, char** out);
BDT_API bdt_status bdt_metric(const bdt_bounds* b, const int* x, const int* y, double* out);
BDT_API bdt_status bdt_is_member(const bdt_function* f, const bdt_bounds* b, int* out);

/* Product distributions with integer masses. */
BDT_API bdt_status bdt_distribution_load(const char* path, bdt_distribution** out);
BDT_API bdt_status bdt_distribution_parse(const char* text, bdt_distribution** out);
/* masses holds d rows of n entries; rows may have different totals. */
BDT_API bdt_status bdt_distribution_create(int n, int d, const int64_t* masses, bdt_distribution** out);
BDT_API void bdt_distribution_free(bdt_distribution* dist);
BDT_API bdt_status bdt_distribution_to_text(const bdt_distribution* dist, char** out);
/* N^d in decimal. */
BDT_API bdt_status bdt_distribution_bloated_size(const bdt_distribution* dist, char** out);
/* probabilities_text: "n d" then d rows of n non-negative weights. */
BDT_API bdt_status bdt_rationalize(const char* probabilities_text, double precision, bdt_distribution** out);

/* Exact L1 distance as JSON. dist may be NULL; max_points 0 selects the default cap. */
BDT_API bdt_status bdt_distance_json(const bdt_function* f, const bdt_bounds* b, const bdt_distribution* dist, int p,
                                     size_t max_points, char** out);

typedef struct bdt_test_options {
    double epsilon;
    int p;
    uint64_t trials; /* 0: default iteration count */
    uint64_t seed;
} bdt_test_options;

/* Runs the tester selected by the bounds, dist (may be NULL) and p. */
BDT_API bdt_status bdt_test_json(const bdt_function* f, const bdt_bounds* b, const bdt_distribution* dist,
                                 const bdt_test_options* options, char** out, int* rejected);

typedef struct bdt_generate_options {
    double target_epsilon; /* 0: a member of P(B) */
    uint64_t seed;
    int integral;       /* nonzero: integer increments */
    double clamp_span;  /* 0: default */
    double spike_scale; /* 0: default */
} bdt_generate_options;

/* info (may be NULL) receives JSON with the measured distance and method. */
BDT_API bdt_status bdt_generate(const bdt_bounds* b, const bdt_distribution* dist, const bdt_generate_options* options,
                                bdt_function** out, char** info);

/* Runs a JSON experiment config. When override_seed is nonzero, seed replaces
 * the config seed. Report files named in the config are written. */
BDT_API bdt_status bdt_experiment_run(const char* config_text, const char* base_dir, uint64_t seed, int override_seed,
                                      char** report_json, char** report_csv, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
