/*
 * C interface of the DDR library: polyhedral meshes, discrete de Rham spaces,
 * verification suites and the magnetostatics solver.
 *
 * Objects are opaque handles created by ddr_*_create/load functions and
 * released with the matching ddr_*_destroy. Functions return a ddr_status;
 * on failure ddr_last_error() describes the problem (per thread).
 * Strings returned by accessors stay valid until the owning handle is
 * destroyed, except those released with ddr_string_free.
 */
#ifndef DDR_DDR_H
#define DDR_DDR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DDR_API __declspec(dllexport)
#else
#define DDR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ddr_status {
  DDR_OK = 0,
  DDR_ERR_ARGUMENT = 1,  /* invalid argument or configuration */
  DDR_ERR_MESH = 2,      /* invalid mesh data or unreadable mesh file */
  DDR_ERR_NUMERICAL = 3, /* singular local system, failed factorization */
  DDR_ERR_INTERNAL = 4
} ddr_status;

typedef struct ddr_mesh ddr_mesh;
typedef struct ddr_report ddr_report;
typedef struct ddr_solution ddr_solution;

DDR_API const char* ddr_version(void);
/* Message of the last failed call on this thread ("" if none) */
DDR_API const char* ddr_last_error(void);
DDR_API void ddr_string_free(char* s);

/* Meshes. `spec` is "cubic:N", "tet:N" or "agglo:N:seed", optionally prefixed by "builtin:". */
DDR_API ddr_status ddr_mesh_builtin(const char* spec, ddr_mesh** out);
DDR_API ddr_status ddr_mesh_load(const char* path, ddr_mesh** out);
DDR_API ddr_status ddr_mesh_from_json(const char* text, ddr_mesh** out);
DDR_API void ddr_mesh_destroy(ddr_mesh* mesh);
/* counts[d] = number of entities of dimension d */
DDR_API ddr_status ddr_mesh_counts(const ddr_mesh* mesh, size_t counts[4]);
/* Largest cell diameter */
DDR_API ddr_status ddr_mesh_size(const ddr_mesh* mesh, double* h);

/* Global dimensions of (X_grad, X_curl, X_div, P^k) */
DDR_API ddr_status ddr_space_dims(const ddr_mesh* mesh, int degree, size_t dims[4]);
/* Local dimensions on one cell */
DDR_API ddr_status ddr_cell_dims(const ddr_mesh* mesh, int degree, int cell, size_t dims[4]);

/* Verification */
typedef struct ddr_verify_config {
  int degree;
  int threads;
  uint64_t seed;
  /* Comma-separated list out of complex, links, commutation, polynomial, traces,
     recovery, poincare, consistency, adjoint; "all" selects every suite. */
  const char* suites;
  /* Family and levels of the refinement suites (consistency, adjoint, and
     poincare when n_levels > 0). NULL/0 select "cubic" and 2,4,8. */
  const char* family;
  const int* levels;
  size_t n_levels;
} ddr_verify_config;

DDR_API void ddr_verify_config_init(ddr_verify_config* config);
/* `mesh` is used by the per-mesh suites and may be NULL when none is selected */
DDR_API ddr_status ddr_verify(const ddr_mesh* mesh, const ddr_verify_config* config, ddr_report** out);
DDR_API void ddr_report_destroy(ddr_report* report);
/* 1 when every check passed */
DDR_API int ddr_report_passed(const ddr_report* report);
DDR_API size_t ddr_report_count(const ddr_report* report);
DDR_API const char* ddr_report_name(const ddr_report* report, size_t i);
DDR_API int ddr_report_check_passed(const ddr_report* report, size_t i);
/* Value of a named metric of check i */
DDR_API ddr_status ddr_report_metric(const ddr_report* report, size_t i, const char* name, double* value);
DDR_API const char* ddr_report_text(const ddr_report* report);
DDR_API const char* ddr_report_json(const ddr_report* report);

/* Magnetostatics on the manufactured solution of (0,1)^3. `mu` holds one
   permeability per cell, or is NULL for mu = 1. */
DDR_API ddr_status ddr_solve(const ddr_mesh* mesh, int degree, int threads, const double* mu, size_t n_mu,
                             ddr_solution** out);
DDR_API void ddr_solution_destroy(ddr_solution* solution);
/* dims[0] = dim X_curl, dims[1] = dim X_div */
DDR_API void ddr_solution_dims(const ddr_solution* solution, size_t dims[2]);
DDR_API double ddr_solution_residual(const ddr_solution* solution);
/* e_curl, e_div, e_rel */
DDR_API void ddr_solution_errors(const ddr_solution* solution, double errors[3]);
/* Wall seconds of the bases, model and solve phases */
DDR_API void ddr_solution_timings(const ddr_solution* solution, double seconds[3]);
/* Copies up to n coefficients of H (X_curl) or A (X_div); returns the full length */
DDR_API size_t ddr_solution_H(const ddr_solution* solution, double* buffer, size_t n);
DDR_API size_t ddr_solution_A(const ddr_solution* solution, double* buffer, size_t n);

/* Convergence study on the manufactured problem; *csv receives the results
   table (release with ddr_string_free). */
DDR_API ddr_status ddr_converge(const char* family, const int* degrees, size_t n_degrees, const int* levels,
                                size_t n_levels, int threads, uint64_t seed, char** csv);

#ifdef __cplusplus
}
#endif

#endif
