/* bmtk: periodic Besov-Morrey analysis toolkit - C interface.
 *
 * Opaque handles + integer status codes.  Every function returns BMTK_OK on
 * success; on failure the thread-local message from bmtk_last_error()
 * describes what went wrong.  Handles are freed with the matching *_free.
 */
#ifndef BMTK_H
#define BMTK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bmtk_status {
    BMTK_OK = 0,
    BMTK_ERR_INVALID_ARGUMENT = 1,
    BMTK_ERR_PRECONDITION = 2,
    BMTK_ERR_IO = 3,
    BMTK_ERR_CFL = 4,
    BMTK_ERR_ASSERTION = 5,
    BMTK_ERR_INTERNAL = 6
} bmtk_status;

typedef struct bmtk_field bmtk_field;    /* scalar field on a periodic grid */
typedef struct bmtk_vfield bmtk_vfield;  /* vector field */

const char* bmtk_version(void);
const char* bmtk_last_error(void);

/* --- fields --------------------------------------------------------------- */

bmtk_status bmtk_field_create(int dim, int size, double length, bmtk_field** out);
bmtk_status bmtk_field_clone(const bmtk_field* f, bmtk_field** out);
void bmtk_field_free(bmtk_field* f);

bmtk_status bmtk_field_info(const bmtk_field* f, int* dim, int* size, double* length);
/* Mutable row-major samples; count = size^dim. */
bmtk_status bmtk_field_data(bmtk_field* f, double** data, size_t* count);

/* JSON header + sibling .bin, bit-exact round trip. */
bmtk_status bmtk_field_write(const bmtk_field* f, const char* header_path);
bmtk_status bmtk_field_read(const char* header_path, bmtk_field** out);

/* --- spectral operations ---------------------------------------------------*/

bmtk_status bmtk_field_derivative(const bmtk_field* f, int axis, int order, bmtk_field** out);
bmtk_status bmtk_field_dealias(const bmtk_field* f, bmtk_field** out);
bmtk_status bmtk_field_dyadic_block(const bmtk_field* f, int j, int homogeneous, bmtk_field** out);
bmtk_status bmtk_field_low_pass(const bmtk_field* f, int j, bmtk_field** out);

bmtk_status bmtk_vfield_create(int dim, int size, double length, bmtk_vfield** out);
bmtk_status bmtk_vfield_from_components(const bmtk_field* const* comps, int n, bmtk_vfield** out);
bmtk_status bmtk_vfield_component(const bmtk_vfield* v, int d, bmtk_field** out);
void bmtk_vfield_free(bmtk_vfield* v);

bmtk_status bmtk_vfield_leray_project(const bmtk_vfield* v, bmtk_vfield** out);
bmtk_status bmtk_vfield_divergence_defect(const bmtk_vfield* v, double* out);
/* grad P for the transport pressure of drift w acting on v. */
bmtk_status bmtk_vfield_pressure_gradient(const bmtk_vfield* w, const bmtk_vfield* v,
                                          bmtk_vfield** out);

/* --- norms ------------------------------------------------------------------
 * Pass BMTK_INF (or any IEEE infinity) for p, q, r endpoints; stride >= 1;
 * kmax = 0 means the full dyadic radius ladder.
 */
#define BMTK_INF (1.0 / 0.0)

bmtk_status bmtk_morrey_norm(const bmtk_field* f, double p, double q, int stride, int kmax,
                             double* out);
bmtk_status bmtk_besov_morrey_norm(const bmtk_field* f, double s, double p, double q, double r,
                                   int homogeneous, int stride, int kmax, double* out);
bmtk_status bmtk_besov_infinity_norm(const bmtk_field* f, double s, double r, int homogeneous,
                                     double* out);

/* --- experiments -------------------------------------------------------------
 * config_json follows the documented experiment schema (see README).  The
 * run writes its artifacts to the configured output location.  exit_code:
 * 0 pass, 1 error, 2 assertion failure.  report_json_out (optional) receives
 * the report document; free it with bmtk_string_free.
 */
bmtk_status bmtk_run_experiment(const char* config_json, int* exit_code, char** report_json_out);
void bmtk_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* BMTK_H */
