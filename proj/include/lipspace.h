/* C surface of the lipspace shared library. All functions return a
 * status code; LIPSPACE_OK is 0. Out-parameters are written only on
 * success. Strings returned through char** are owned by the caller and
 * released with lipspace_string_free. Handles are opaque and released
 * with their matching _free function. The last failing call's message is
 * available per thread via lipspace_last_error. */

#ifndef LIPSPACE_H
#define LIPSPACE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  LIPSPACE_OK = 0,
  LIPSPACE_ERR_INVALID_ARGUMENT = 1,
  LIPSPACE_ERR_PRECONDITION = 2,
  LIPSPACE_ERR_FACES_EXCEED_CAPACITY = 3,
  LIPSPACE_ERR_SITE_SEPARATION = 4,
  LIPSPACE_ERR_WITNESS_INVALID = 5,
  LIPSPACE_ERR_DEPTH_EXHAUSTED = 6,
  LIPSPACE_ERR_RESOLUTION_TOO_COARSE = 7,
  LIPSPACE_ERR_DIRECTION_NOT_LIPSCHITZ = 8,
  LIPSPACE_ERR_COVERAGE_UNCERTIFIED = 9,
  LIPSPACE_ERR_UNKNOWN_COMMAND = 10,
  LIPSPACE_ERR_CHECK_FAILED = 11,
  LIPSPACE_ERR_IO = 12,
  LIPSPACE_ERR_INTERNAL = 13
} lipspace_status;

typedef struct lipspace_model lipspace_model;
typedef struct lipspace_norm lipspace_norm;

/* Message of the most recent failing call on the calling thread; empty
 * string when no failure has occurred. The pointer stays valid until the
 * next failing call on the same thread. */
const char* lipspace_last_error(void);

void lipspace_string_free(char* s);

/* --- models ------------------------------------------------------------ */

/* spec uses the compact colon syntax, e.g. "fan:8", "cantor:4",
 * "interval_grid:101", "lq_ball:2:8:500:7". */
lipspace_status lipspace_model_create(const char* spec, lipspace_model** out);
lipspace_status lipspace_model_from_json(const char* json_text,
                                         lipspace_model** out);
lipspace_status lipspace_model_to_json(const lipspace_model* model, char** out);
size_t lipspace_model_size(const lipspace_model* model);
double lipspace_model_delta(const lipspace_model* model);
double lipspace_model_fine_dist(const lipspace_model* model, size_t i, size_t j);
double lipspace_model_coarse_dist(const lipspace_model* model, size_t i,
                                  size_t j);
void lipspace_model_free(lipspace_model* model);

/* --- fields over a model ----------------------------------------------- */

/* values has model size entries; coarse selects the coarse metric. */
lipspace_status lipspace_lip_constant(const lipspace_model* model,
                                      const double* values, size_t n,
                                      int coarse, double* out);

/* Extends L-Lipschitz data on subset (m indices/values) to the whole
 * model, clamped to [lo, hi]; out_values has model size entries. */
lipspace_status lipspace_mcshane_extend(const lipspace_model* model,
                                        const size_t* subset,
                                        const double* values, size_t m,
                                        double L, double lo, double hi,
                                        double* out_values);

/* Writes at most capacity member indices; out_count gets the true count
 * (call with capacity 0 to size the buffer). */
lipspace_status lipspace_closed_ball(const lipspace_model* model,
                                     const size_t* points, size_t m, double r,
                                     size_t* out_indices, size_t capacity,
                                     size_t* out_count);

/* --- derivation engine -------------------------------------------------- */

/* out_finite is 1 for a Finite verdict with out_index levels, 0 for a
 * nonempty fixpoint (out_index then holds the fixpoint size). */
lipspace_status lipspace_szlenk_index(const lipspace_model* model, double eps,
                                      double delta, int* out_finite,
                                      int* out_index);

/* --- norms and maps ----------------------------------------------------- */

lipspace_status lipspace_norm_preset(const char* name, lipspace_norm** out);
lipspace_status lipspace_norm_eval(const lipspace_norm* norm, const double* x,
                                   size_t n, double* out);
lipspace_status lipspace_norm_face_count(const lipspace_norm* norm, int* out);
void lipspace_norm_free(lipspace_norm* norm);

/* Coordinatewise signed power map; out has n entries. */
lipspace_status lipspace_mazur_map(const double* x, size_t n, double q1,
                                   double q2, double* out);

/* --- command runner ------------------------------------------------------ */

/* config_json: {"command": ..., "params": {...}, "out_dir": optional}.
 * Writes the report JSON (caller-owned) and the process exit status that
 * the CLI should use (0 passed, 1 failed check, 2 unknown command).
 * Returns LIPSPACE_OK whenever a report was produced. */
lipspace_status lipspace_run_json(const char* config_json, char** report_json,
                                  int* exit_status);

/* JSON array of {command, operation, description}, one row per public
 * library operation. */
lipspace_status lipspace_list_commands(char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* LIPSPACE_H */
