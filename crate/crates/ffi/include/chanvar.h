#ifndef CHANVAR_H
#define CHANVAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Input errors use the same numbers as the CLI exit codes.
 */
typedef enum {
  CHANVAR_STATUS_OK = 0,
  CHANVAR_STATUS_NULL_POINTER = 1,
  CHANVAR_STATUS_INVALID_INPUT = 2,
  CHANVAR_STATUS_NUMERICAL = 3,
  CHANVAR_STATUS_IO = 4,
  CHANVAR_STATUS_PANIC = 5,
} ChanvarStatus;

/**
 * Opaque trace-preserving channel.
 */
typedef struct ChanvarChannel ChanvarChannel;

/**
 * Opaque density matrix.
 */
typedef struct ChanvarState ChanvarState;

typedef struct {
  double total;
  double quantum;
  double classical;
} ChanvarTriple;

typedef struct {
  double lhs;
  double rhs;
  double slack;
  bool satisfied;
} ChanvarBound;

typedef struct {
  double total;
  double entanglement_fidelity;
  double entropy_exchange;
  double coherent_information;
  ChanvarBound fidelity_tradeoff;
  ChanvarBound entropy_exchange_bound;
  ChanvarBound coherent_information_bound;
  ChanvarBound quantum_fano;
} ChanvarBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *chanvar_last_error_message(void);

/**
 * Loads a state from a JSON file path or a `preset:NAME[:k=v,...]` string.
 *
 * # Safety
 * `source` must be a nul-terminated string; `out` must be writable.
 */
ChanvarStatus chanvar_state_load(const char *source, ChanvarState **out);

/**
 * Parses a state from a JSON document.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
ChanvarStatus chanvar_state_from_json(const char *json, ChanvarState **out);

/**
 * Builds a state from a row-major `dim x dim` matrix.
 *
 * # Safety
 * `re` (and `im` unless null) must point to `dim * dim` doubles; `out` must be writable.
 */
ChanvarStatus chanvar_state_from_matrix(size_t dim,
                                        const double *re,
                                        const double *im,
                                        ChanvarState **out);

/**
 * Dimension of the state, 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t chanvar_state_dim(const ChanvarState *state);

/**
 * # Safety
 * `state` must be null or a handle not yet freed.
 */
void chanvar_state_free(ChanvarState *state);

/**
 * Loads a channel from a JSON file path or a `preset:NAME[:k=v,...]` string.
 *
 * # Safety
 * `source` must be a nul-terminated string; `out` must be writable.
 */
ChanvarStatus chanvar_channel_load(const char *source, ChanvarChannel **out);

/**
 * Parses a channel from a JSON document.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
ChanvarStatus chanvar_channel_from_json(const char *json, ChanvarChannel **out);

/**
 * Builds a channel from `count` row-major `dim x dim` Kraus operators
 * stored back to back.
 *
 * # Safety
 * `re` (and `im` unless null) must point to `count * dim * dim` doubles; `out` must be writable.
 */
ChanvarStatus chanvar_channel_from_kraus(size_t dim,
                                         size_t count,
                                         const double *re,
                                         const double *im,
                                         ChanvarChannel **out);

/**
 * Input dimension of the channel, 0 for a null handle.
 *
 * # Safety
 * `channel` must be null or a live handle.
 */
size_t chanvar_channel_dim(const ChanvarChannel *channel);

/**
 * # Safety
 * `channel` must be null or a handle not yet freed.
 */
void chanvar_channel_free(ChanvarChannel *channel);

/**
 * Total, quantum and classical uncertainty of `channel` in `state`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
ChanvarStatus chanvar_uncertainty(const ChanvarState *state,
                                  const ChanvarChannel *channel,
                                  double alpha,
                                  double beta,
                                  ChanvarTriple *out);

/**
 * Information quantities and the four bounds relating them to the uncertainty.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
ChanvarStatus chanvar_bounds(const ChanvarState *state,
                             const ChanvarChannel *channel,
                             double alpha,
                             double beta,
                             ChanvarBounds *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHANVAR_H */
