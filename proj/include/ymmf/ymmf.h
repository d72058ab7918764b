#ifndef YMMF_H
#define YMMF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define YMMF_API __declspec(dllexport)
#else
#define YMMF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 1.. mirror the library's error kinds. */
typedef enum ymmf_status {
    YMMF_OK = 0,
    YMMF_ERR_NOT_INVOLUTION,
    YMMF_ERR_NOT_PERMUTATION,
    YMMF_ERR_NEGATIVE_GENUS,
    YMMF_ERR_BOUNDARY_ADJACENT,
    YMMF_ERR_HAS_BOUNDARY,
    YMMF_ERR_NOT_A_LOOP,
    YMMF_ERR_INVALID_PATH,
    YMMF_ERR_EDGE_REUSED,
    YMMF_ERR_VERTEX_OVERUSED,
    YMMF_ERR_NOT_A_CROSSING,
    YMMF_ERR_DEGREE_MISMATCH,
    YMMF_ERR_BASIS_NOT_INDEPENDENT,
    YMMF_ERR_NONZERO_HOMOLOGY,
    YMMF_ERR_NOT_TAME,
    YMMF_ERR_NEGATIVE_ORDER,
    YMMF_ERR_UNKNOWN_GENERATOR,
    YMMF_ERR_WRONG_BOUNDARY_COUNT,
    YMMF_ERR_NOT_ON_MAP,
    YMMF_ERR_WRONG_GENUS,
    YMMF_ERR_AREA_MISMATCH,
    YMMF_ERR_BOUNDARY_OF_SIMPLEX,
    YMMF_ERR_NOT_REGULAR_WRT_POLYGON,
    YMMF_ERR_NO_POLYGON_STRUCTURE,
    YMMF_ERR_UNSUPPORTED_FAMILY,
    YMMF_ERR_NOT_IN_GROUP,
    YMMF_ERR_NEGATIVE_TIME,
    YMMF_ERR_CLOSURE_EXPLOSION,
    YMMF_ERR_SCHEMA,
    YMMF_ERR_DANGLING_ID,
    YMMF_ERR_INVALID_ARGUMENT,
    YMMF_ERR_INTERNAL = 100
} ymmf_status;

typedef struct ymmf_map ymmf_map;
typedef struct ymmf_report ymmf_report;

YMMF_API const char* ymmf_version(void);
YMMF_API const char* ymmf_status_name(ymmf_status status);
/* Message of the last failing call on this thread; empty after success. */
YMMF_API const char* ymmf_last_error(void);
YMMF_API void ymmf_string_free(char* s);
/* Worker count from YMMF_WORKERS, else the hardware concurrency. */
YMMF_API int ymmf_default_workers(void);

/* ---- maps ---- */

YMMF_API ymmf_status ymmf_map_parse(const char* text, ymmf_map** out);
YMMF_API ymmf_status ymmf_map_load(const char* path, ymmf_map** out);
/* Built-in maps: "simple-loop", "figure-eight", "torus", "genus2", "torus-hole", "grid:CxR", "torus-grid:CxR". */
YMMF_API ymmf_status ymmf_map_builtin(const char* name, ymmf_map** out);
YMMF_API void ymmf_map_free(ymmf_map* m);
YMMF_API ymmf_status ymmf_map_serialize(const ymmf_map* m, char** out);

typedef struct ymmf_map_info {
    int darts, vertices, edges, faces, genus;
    int boundary_faces;
    int has_polygon;
    int has_areas;
    int loops;
} ymmf_map_info;

YMMF_API ymmf_status ymmf_map_get_info(const ymmf_map* m, ymmf_map_info* out);
/* Name of the i-th named loop; valid while the map lives. */
YMMF_API const char* ymmf_map_loop_name(const ymmf_map* m, int i);

typedef struct ymmf_loop_info {
    int length;
    int base;
    int tame;
    int transverse_crossings;
    int touchings;
    int null_homologous;
    /* -1 when the map has no polygon structure. */
    int contractible;
} ymmf_loop_info;

/* `loop` is a loop name from the document or a dart list such as "0,2,1,3". */
YMMF_API ymmf_status ymmf_loop_get_info(const ymmf_map* m, const char* loop, ymmf_loop_info* out);
/* Writes up to `cap` crossing vertices; *count receives the total. */
YMMF_API ymmf_status ymmf_loop_crossings(const ymmf_map* m, const char* loop, int* vertices, size_t cap, size_t* count);

/* ---- evaluation; `areas` is "a,b,..." over interior faces or NULL for the document's areas ---- */

YMMF_API ymmf_status ymmf_eval_planar(const ymmf_map* m, const char* loop, const char* areas, double* value);
YMMF_API ymmf_status ymmf_eval_one_boundary(const ymmf_map* m, const char* loop, const char* areas, double* value);
YMMF_API ymmf_status ymmf_eval_surface(const ymmf_map* m, const char* loop, const char* areas, double* value,
                                       int* contractible, int* conjectural);
/* Planar residual on maps with boundary, surface residual on polygon maps. */
YMMF_API ymmf_status ymmf_mm_residual(const ymmf_map* m, const char* loop, const char* areas, int vertex, double h,
                                      double* residual);

/* ---- Monte Carlo ---- */

typedef struct ymmf_mc_config {
    const char* group;
    int N;
    uint64_t samples;
    uint64_t seed;
    int workers;
    int steps;
} ymmf_mc_config;

/* Estimates E Re tr(h_l) for each loop; arrays have length nloops. */
YMMF_API ymmf_status ymmf_mc_run(const ymmf_map* m, const char* const* loops, size_t nloops, const char* areas,
                                 const ymmf_mc_config* cfg, double* mean, double* stderr_out, double* variance);

/* Largest residuals of the two Casimir trace identities over random pairs. */
YMMF_API ymmf_status ymmf_magic_check(const char* group, int N, int pairs, uint64_t seed, double* max_first,
                                      double* max_second);

/* ---- free moments and interpolation ---- */

YMMF_API ymmf_status ymmf_nu(double t, int n, double* value);
YMMF_API ymmf_status ymmf_tfree_moment(const char* word, double t, double* value);
YMMF_API ymmf_status ymmf_phi_t(const char* word, double T, double* value);

typedef struct ymmf_interp_row {
    double phi, tfree, classical, free_value;
    int separating;
} ymmf_interp_row;

YMMF_API ymmf_status ymmf_interp_row_eval(const char* word, double T, ymmf_interp_row* out);
YMMF_API ymmf_status ymmf_interp_limits(const char* word, double* classical_gap, double* free_gap);
/* Canonical spelling of a word. */
YMMF_API ymmf_status ymmf_word_format(const char* word, char** out);

/* ---- reports ---- */

YMMF_API ymmf_report* ymmf_report_new(const char* command);
YMMF_API void ymmf_report_free(ymmf_report* r);
YMMF_API void ymmf_report_config(ymmf_report* r, const char* key, const char* value);
/* stderr and runtime_ms may be NaN to leave the column empty; note may be NULL. */
YMMF_API void ymmf_report_item(ymmf_report* r, const char* item, double value, double stderr_value,
                               const char* provenance, double runtime_ms, const char* note);
YMMF_API void ymmf_report_gate(ymmf_report* r, const char* name, int passed, const char* detail);
YMMF_API int ymmf_report_failed_gates(const ymmf_report* r);
YMMF_API ymmf_status ymmf_report_markdown(const ymmf_report* r, char** out);
YMMF_API ymmf_status ymmf_report_csv(const ymmf_report* r, char** out);

/* Fast built-in gates appended to r; returns the number of failures. */
YMMF_API int ymmf_selftest(ymmf_report* r);

#ifdef __cplusplus
}
#endif

#endif
