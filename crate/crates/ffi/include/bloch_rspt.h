#ifndef BLOCH_RSPT_H
#define BLOCH_RSPT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define BLOCH_OK 0

#define BLOCH_ERR_NULL_POINTER 1

#define BLOCH_ERR_INVALID_UTF8 2

#define BLOCH_ERR_INVALID_ARGUMENT 3

#define BLOCH_ERR_INVALID_SEQUENCE 4

#define BLOCH_ERR_CAP_EXCEEDED 5

#define BLOCH_ERR_NOT_HERMITIAN 6

#define BLOCH_ERR_DEGENERATE_TARGET 7

#define BLOCH_ERR_PARSE 8

#define BLOCH_ERR_INCONSISTENT 9

#define BLOCH_ERR_BUFFER_TOO_SMALL 10

#define BLOCH_ERR_OUT_OF_RANGE 11

#define BLOCH_ERR_PANIC 12

#define BLOCH_METHOD_CLOSED 0

#define BLOCH_METHOD_RECURRENCE 1

#define BLOCH_ROUTE_DIAGRAMMATIC 0

#define BLOCH_ROUTE_TEXTBOOK 1

#define BLOCH_ROUTE_BLOCH 2

// Memoising coefficient engine. Safe to share between threads.
typedef struct BlochEngine BlochEngine;

// Validated Hamiltonian `H0 + eps V` with a chosen target level.
typedef struct BlochHamiltonian BlochHamiltonian;

// Energy and eigenvector corrections up to some order.
typedef struct BlochSeries BlochSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *bloch_version(void);

// Message for the most recent failure on this thread, or NULL.
//
// The pointer stays valid until the next library call on the same thread.
const char *bloch_last_error_message(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void bloch_string_free(char *s);

struct BlochEngine *bloch_engine_new(void);

// # Safety
// `engine` must come from [`bloch_engine_new`] or be NULL.
void bloch_engine_free(struct BlochEngine *engine);

// Exact `c` and `e` of a sequence as "p/q" strings.
//
// # Safety
// `parts` must point to `len` values; the out-pointers must be writable.
int32_t bloch_coeff(const struct BlochEngine *engine,
                    const uint32_t *parts,
                    uintptr_t len,
                    uint32_t method_id,
                    char **out_c,
                    char **out_e);

// `c` and `e` of a sequence rounded to double precision.
//
// # Safety
// As for [`bloch_coeff`].
int32_t bloch_coeff_f64(const struct BlochEngine *engine,
                        const uint32_t *parts,
                        uintptr_t len,
                        uint32_t method_id,
                        double *out_c,
                        double *out_e);

// Flat crossing numbers `(N1, n1, ..., Nm, nm)`.
//
// `out_len` always receives the required length. If `capacity` is smaller,
// nothing is written to `out` and [`BLOCH_ERR_BUFFER_TOO_SMALL`] is returned.
//
// # Safety
// `out` must have room for `capacity` values; `out_len` must be writable.
int32_t bloch_crossing_numbers(const uint32_t *parts,
                               uintptr_t len,
                               uint32_t *out,
                               uintptr_t capacity,
                               uintptr_t *out_len);

// # Safety
// `parts` must point to `len` values; `out` must be writable.
int32_t bloch_is_convex(const uint32_t *parts, uintptr_t len, bool *out);

// Number of Bloch sequences of order `n`, as a decimal string.
//
// # Safety
// `out` must be writable.
int32_t bloch_count_sequences(uintptr_t n, char **out);

// Parses and validates a Hamiltonian JSON document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
int32_t bloch_hamiltonian_from_json(const char *json, struct BlochHamiltonian **out);

// # Safety
// `h` must be a live handle or NULL.
uintptr_t bloch_hamiltonian_dim(const struct BlochHamiltonian *h);

// # Safety
// `h` must come from [`bloch_hamiltonian_from_json`] or be NULL.
void bloch_hamiltonian_free(struct BlochHamiltonian *h);

// Computes corrections through `order` along one route.
//
// `engine` is only consulted by the diagrammatic route and may be NULL
// otherwise. The enumeration cap is the library default.
//
// # Safety
// Handles must be live; `out` must be writable.
int32_t bloch_series_new(const struct BlochHamiltonian *h,
                         const struct BlochEngine *engine,
                         uint32_t route,
                         uintptr_t order,
                         bool grouping,
                         struct BlochSeries **out);

// # Safety
// `s` must be a live handle or NULL.
uintptr_t bloch_series_order(const struct BlochSeries *s);

// Energy correction `lambda_n`, `0 <= n <= order`.
//
// # Safety
// `s` must be a live handle; `out` must be writable.
int32_t bloch_series_energy(const struct BlochSeries *s, uintptr_t n, double *out);

// Vector correction `|lambda_n>` split into real and imaginary parts.
//
// # Safety
// `re` and `im` must each have room for `len` values, and `len` must equal
// the Hamiltonian dimension.
int32_t bloch_series_vector(const struct BlochSeries *s,
                            uintptr_t n,
                            double *re,
                            double *im,
                            uintptr_t len);

// # Safety
// `s` must come from [`bloch_series_new`] or be NULL.
void bloch_series_free(struct BlochSeries *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOCH_RSPT_H */
