#ifndef CHIRP_PAPR_H
#define CHIRP_PAPR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_INVALID_ARGUMENT = 2,
  CP_STATUS_LENGTH_MISMATCH = 3,
  CP_STATUS_UNSUPPORTED = 4,
  CP_STATUS_INTERNAL = 5,
} CpStatus;

typedef enum CpWaveform {
  CP_WAVEFORM_OFDM = 0,
  CP_WAVEFORM_OCDM = 1,
  CP_WAVEFORM_AFDM = 2,
} CpWaveform;

typedef enum CpSpreading {
  CP_SPREADING_NONE = 0,
  CP_SPREADING_WHT = 1,
  CP_SPREADING_DCT = 2,
  // `param` is the root; 0 selects root 1.
  CP_SPREADING_ZC = 3,
  // `param` is the interleaver stride; 0 selects the default.
  CP_SPREADING_INTERLEAVED_DFT = 4,
} CpSpreading;

// Opaque modulator handle.
typedef struct CpModulator CpModulator;

// Opaque spreader handle.
typedef struct CpSpreader CpSpreader;

// Opaque spreader + modulator handle.
typedef struct CpTransmitter CpTransmitter;

typedef struct CpComplex {
  double re;
  double im;
} CpComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf` (nul
// terminated, truncated to `buf_len`). Returns the full message length
// excluding the nul, or 0 when there is no error recorded.
//
// # Safety
// `buf` must be null or point to `buf_len` writable bytes.
size_t cp_last_error_message(char *buf, size_t buf_len);

// Creates a modulator. `c1`/`c2` are used only for AFDM.
//
// # Safety
// `out` must be valid for writes.
enum CpStatus cp_modulator_new(enum CpWaveform kind,
                               size_t len,
                               double c1,
                               double c2,
                               struct CpModulator **out);

// # Safety
// `m` must come from `cp_modulator_new`; `input`/`output` hold `len` values.
enum CpStatus cp_modulator_modulate(const struct CpModulator *m,
                                    const struct CpComplex *input,
                                    struct CpComplex *output,
                                    size_t len);

// # Safety
// As for [`cp_modulator_modulate`].
enum CpStatus cp_modulator_demodulate(const struct CpModulator *m,
                                      const struct CpComplex *input,
                                      struct CpComplex *output,
                                      size_t len);

// # Safety
// `m` must be null or come from `cp_modulator_new`, freed at most once.
void cp_modulator_free(struct CpModulator *m);

// Creates a spreader. `param` is the ZC root or interleaver stride (0 for
// the default) and is ignored otherwise.
//
// # Safety
// `out` must be valid for writes.
enum CpStatus cp_spreader_new(enum CpSpreading kind,
                              size_t param,
                              size_t len,
                              struct CpSpreader **out);

// # Safety
// `s` must come from `cp_spreader_new`; `input`/`output` hold `len` values.
enum CpStatus cp_spreader_spread(const struct CpSpreader *s,
                                 const struct CpComplex *input,
                                 struct CpComplex *output,
                                 size_t len);

// # Safety
// As for [`cp_spreader_spread`].
enum CpStatus cp_spreader_despread(const struct CpSpreader *s,
                                   const struct CpComplex *input,
                                   struct CpComplex *output,
                                   size_t len);

// # Safety
// `s` must be null or come from `cp_spreader_new`, freed at most once.
void cp_spreader_free(struct CpSpreader *s);

// Spreading followed by modulation.
//
// # Safety
// `out` must be valid for writes.
enum CpStatus cp_transmitter_new(enum CpSpreading spread,
                                 size_t param,
                                 enum CpWaveform kind,
                                 size_t len,
                                 double c1,
                                 double c2,
                                 struct CpTransmitter **out);

// # Safety
// `t` must come from `cp_transmitter_new`; `input`/`output` hold `len`
// values.
enum CpStatus cp_transmitter_transmit(const struct CpTransmitter *t,
                                      const struct CpComplex *input,
                                      struct CpComplex *output,
                                      size_t len);

// # Safety
// As for [`cp_transmitter_transmit`].
enum CpStatus cp_transmitter_receive(const struct CpTransmitter *t,
                                     const struct CpComplex *input,
                                     struct CpComplex *output,
                                     size_t len);

// # Safety
// `t` must be null or come from `cp_transmitter_new`, freed at most once.
void cp_transmitter_free(struct CpTransmitter *t);

// PAPR of `signal` in dB.
//
// # Safety
// `signal` holds `len` values; `out_db` is valid for writes.
enum CpStatus cp_papr_db(const struct CpComplex *signal, size_t len, double *out_db);

// Closed-form CCDF of the PAPR of `n` i.i.d. complex Gaussian samples.
double cp_analytic_ofdm_ccdf(size_t n, double papr0_db);

// Empirical CCDF: `out_probs[i]` = fraction of `samples_db` strictly above
// `grid_db[i]`. The grid must be strictly ascending.
//
// # Safety
// `samples_db` holds `n_samples` values, `grid_db` and `out_probs` hold
// `n_grid` values.
enum CpStatus cp_ccdf(const double *samples_db,
                      size_t n_samples,
                      const double *grid_db,
                      size_t n_grid,
                      double *out_probs);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHIRP_PAPR_H */
