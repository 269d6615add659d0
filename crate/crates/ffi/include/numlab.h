#ifndef NUMLAB_H
#define NUMLAB_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NlStatus {
  NL_STATUS_OK = 0,
  NL_STATUS_NULL_POINTER = 1,
  NL_STATUS_INVALID_ARGUMENT = 2,
  NL_STATUS_CAP_EXCEEDED = 3,
  NL_STATUS_INTERNAL = 4,
  NL_STATUS_PANIC = 5,
} NlStatus;

// LP formulation selector for [`nl_theta_circulant`].
typedef enum NlFormulation {
  NL_FORMULATION_TIME_PRIMAL = 0,
  NL_FORMULATION_TIME_DUAL = 1,
  NL_FORMULATION_FREQ_PRIMAL = 2,
  NL_FORMULATION_FREQ_DUAL = 3,
} NlFormulation;

// Opaque circulant connection-set handle.
typedef struct NlCirculant NlCirculant;

// Opaque complex frame handle (`d × n`, columns are frame vectors).
typedef struct NlFrame NlFrame;

// Opaque graph handle.
typedef struct NlGraph NlGraph;

typedef struct NlThetaValue {
  double value;
  double gap;
  bool converged;
} NlThetaValue;

typedef struct NlEtfReport {
  double max_norm_dev;
  double max_equiangularity_dev;
  double tightness_dev;
  double coherence;
  double welch_bound;
  bool pass;
} NlEtfReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf` (NUL
// terminated, truncated to `len`). Returns the full message length in bytes
// excluding the terminator.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t nl_last_error_message(char *buf, size_t len);

// Seed derived from `master` and a NUL-terminated label.
//
// # Safety
// `label` must be a valid C string and `out` writable.
enum NlStatus nl_derive_seed(uint64_t master, const char *label, uint64_t *out);

// Graph on `n` vertices from `edge_count` pairs stored flat in `edges`.
//
// # Safety
// `edges` must hold `2 * edge_count` values; `out` must be writable.
enum NlStatus nl_graph_from_edges(size_t n,
                                  const uint32_t *edges,
                                  size_t edge_count,
                                  struct NlGraph **out);

// Erdős–Rényi graph `G(n, p)`.
//
// # Safety
// `out` must be writable.
enum NlStatus nl_graph_er(size_t n, double p, uint64_t seed, struct NlGraph **out);

// # Safety
// `g` must be null or a handle from this library, not yet freed.
void nl_graph_free(struct NlGraph *g);

// # Safety
// `g` must be a live handle.
size_t nl_graph_vertex_count(const struct NlGraph *g);

// # Safety
// `g` must be a live handle.
size_t nl_graph_edge_count(const struct NlGraph *g);

// Circulant graph on `Z_n` with the given connection set.
//
// # Safety
// `conn` must hold `len` values; `out` must be writable.
enum NlStatus nl_circulant_new(size_t n,
                               const uint32_t *conn,
                               size_t len,
                               struct NlCirculant **out);

// Random circulant graph: each shift pair is present with probability 1/2.
//
// # Safety
// `out` must be writable.
enum NlStatus nl_circulant_random(size_t n, uint64_t seed, struct NlCirculant **out);

// Paley graph on `Z_p`, `p ≡ 1 (mod 4)` prime.
//
// # Safety
// `out` must be writable.
enum NlStatus nl_paley(size_t p, struct NlCirculant **out);

// # Safety
// `c` must be a live handle and `out` writable.
enum NlStatus nl_circulant_complement(const struct NlCirculant *c, struct NlCirculant **out);

// # Safety
// `c` must be a live handle and `out` writable.
enum NlStatus nl_circulant_to_graph(const struct NlCirculant *c, struct NlGraph **out);

// # Safety
// `c` must be null or a handle from this library, not yet freed.
void nl_circulant_free(struct NlCirculant *c);

// Theta of a circulant graph by the selected LP.
//
// # Safety
// `c` must be a live handle and `out` writable.
enum NlStatus nl_theta_circulant(const struct NlCirculant *c,
                                 enum NlFormulation formulation,
                                 struct NlThetaValue *out);

// Theta of a general graph by the SDP path, to absolute bracket `tol`.
//
// # Safety
// `g` must be a live handle and `out` writable.
enum NlStatus nl_theta_sdp(const struct NlGraph *g, double tol, struct NlThetaValue *out);

// Exact ω of a real `rows × cols` measurement matrix given row-major.
//
// # Safety
// `data` must hold `rows * cols` values and `out` be writable.
enum NlStatus nl_omega(const double *data, size_t rows, size_t cols, double *out);

// Paley equiangular tight frame for a prime `p ≡ 1 (mod 4)`.
//
// # Safety
// `out` must be writable.
enum NlStatus nl_paley_etf(size_t p, struct NlFrame **out);

// # Safety
// `f` must be a live handle; `d` and `n` writable.
enum NlStatus nl_frame_dims(const struct NlFrame *f, size_t *d, size_t *n);

// # Safety
// `f` must be a live handle and `out` writable.
enum NlStatus nl_verify_etf(const struct NlFrame *f, double tol, struct NlEtfReport *out);

// # Safety
// `f` must be null or a handle from this library, not yet freed.
void nl_frame_free(struct NlFrame *f);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NUMLAB_H */
