#ifndef HARTOGS_H
#define HARTOGS_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum HartogsStatus {
  HARTOGS_STATUS_OK = 0,
  HARTOGS_STATUS_NULL_POINTER = 1,
  HARTOGS_STATUS_INVALID_ARGUMENT = 2,
  HARTOGS_STATUS_NON_INTEGER_EXPONENT = 3,
  HARTOGS_STATUS_OUTSIDE_DOMAIN = 4,
  HARTOGS_STATUS_NEAR_SINGULAR = 5,
  HARTOGS_STATUS_NOT_CONVERGED = 6,
  HARTOGS_STATUS_DIVERGENT_INTEGRAL = 7,
  HARTOGS_STATUS_PANIC = 8,
} HartogsStatus;

/*
 Opaque domain handle.
 */
typedef struct HartogsDomain HartogsDomain;

typedef struct HartogsComplex {
  double re;
  double im;
} HartogsComplex;

typedef struct HartogsPoint {
  struct HartogsComplex z1;
  struct HartogsComplex z2;
} HartogsPoint;

/*
 Creates a domain `Ω_k`. Kernel functions need an integer `k`.

 # Safety
 `out` must be valid for writes.
 */
enum HartogsStatus hartogs_domain_new(double k, struct HartogsDomain **out);

/*
 Releases a handle from [`hartogs_domain_new`]; null is ignored.

 # Safety
 `d` must come from [`hartogs_domain_new`] and not be used afterwards.
 */
void hartogs_domain_free(struct HartogsDomain *d);

/*
 # Safety
 Pointers must be valid.
 */
enum HartogsStatus hartogs_domain_contains(const struct HartogsDomain *d,
                                           struct HartogsPoint p,
                                           bool *out);

/*
 # Safety
 Pointers must be valid.
 */
enum HartogsStatus hartogs_domain_volume(const struct HartogsDomain *d, double *out);

/*
 `h(z) = (|z₂|² − |z₁|^{2k})(1 − |z₂|²)`.

 # Safety
 Pointers must be valid.
 */
enum HartogsStatus hartogs_aux_h(const struct HartogsDomain *d, struct HartogsPoint p, double *out);

/*
 # Safety
 Pointers must be valid.
 */
enum HartogsStatus hartogs_kernel_closed(const struct HartogsDomain *d,
                                         struct HartogsPoint z,
                                         struct HartogsPoint w,
                                         struct HartogsComplex *out);

/*
 Series evaluation with the default truncation (relative 1e-13, degree
 at most 1000). `degree` may be null.

 # Safety
 Pointers must be valid.
 */
enum HartogsStatus hartogs_kernel_series(const struct HartogsDomain *d,
                                         struct HartogsPoint z,
                                         struct HartogsPoint w,
                                         struct HartogsComplex *out,
                                         uint32_t *degree);

/*
 `|t| / (|1 − t|² |t − s^k|²)`.

 # Safety
 Pointers must be valid.
 */
enum HartogsStatus hartogs_kernel_bound(const struct HartogsDomain *d,
                                        struct HartogsPoint z,
                                        struct HartogsPoint w,
                                        double *out);

/*
 `∫ |z₁|^{m₁} |z₂|^{m₂} dV`.

 # Safety
 Pointers must be valid.
 */
enum HartogsStatus hartogs_radial_moment(const struct HartogsDomain *d,
                                         double m1,
                                         double m2,
                                         double *out);

/*
 # Safety
 Pointers must be valid.
 */
enum HartogsStatus hartogs_critical_range(const struct HartogsDomain *d,
                                          double *p_low,
                                          double *p_high);

/*
 # Safety
 Pointers must be valid.
 */
enum HartogsStatus hartogs_schur_range(double a, double b, double *p_low, double *p_high);

/*
 Exact projection of `w^a w̄^b`: `coeff · z^γ`. When the projection is
 zero, `coeff` is 0 and `γ = a − b`.

 # Safety
 Pointers must be valid.
 */
enum HartogsStatus hartogs_project_monomial(const struct HartogsDomain *d,
                                            int64_t a1,
                                            int64_t a2,
                                            int64_t b1,
                                            int64_t b2,
                                            int64_t *gamma1,
                                            int64_t *gamma2,
                                            double *coeff);

/*
 Copies the calling thread's last error message into `buf` (NUL
 terminated) and returns its length without the terminator. With a null
 or short buffer nothing is copied and the required length is returned.

 # Safety
 `buf` must be valid for `len` bytes or null.
 */
uintptr_t hartogs_last_error_message(char *buf, uintptr_t len);

#endif  /* HARTOGS_H */
