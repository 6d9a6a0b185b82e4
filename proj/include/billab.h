/* billab — partially rectangular billiard laboratory: C API.
 *
 * Opaque handles + integer status codes over the C++ core.  Every function
 * returns BLB_OK (0) on success; on failure a short message is retrievable via
 * blb_last_error() (thread-local).  Handles are destroyed with the matching
 * *_destroy call; destroy functions accept NULL.
 */
#ifndef BILLAB_H
#define BILLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t blb_status;

enum {
    BLB_OK = 0,
    BLB_EINVAL = 1,       /* invalid argument */
    BLB_EDOMAIN = 2,      /* point outside the domain */
    BLB_EREGULARITY = 3,  /* derivative/exponent needs more boundary regularity */
    BLB_EDEGENERATE = 4,  /* metric degenerates (Y = 0) */
    BLB_ERESOLUTION = 5,  /* grid too coarse for the feature */
    BLB_ESOLVER = 6,      /* iteration failed to converge */
    BLB_EIO = 7,          /* file i/o failure */
    BLB_EDATA = 8,        /* insufficient data */
    BLB_ECONFIG = 9,      /* config parse/validation error */
    BLB_EINTERNAL = 10
};

const char* blb_version(void);
const char* blb_status_name(blb_status s);
/* Message from the most recent failing call on this thread ("" if none). */
const char* blb_last_error(void);

/* ---- domain profiles ---------------------------------------------------- */

typedef struct blb_profile blb_profile;

blb_status blb_profile_create_stadium(double a, double half_width, blb_profile** out);
blb_status blb_profile_create_flat(double a, double half_width, double x_extent,
                                   blb_profile** out);
blb_status blb_profile_create_power(double a, double half_width, int k, double alpha,
                                    double coeff, double wing_span, blb_profile** out);
blb_status blb_profile_create_gevrey(double a, double half_width, double tau, double coeff,
                                     double wing_span, blb_profile** out);
void blb_profile_destroy(blb_profile* p);

blb_status blb_profile_eval_y(const blb_profile* p, double x, double* out);
/* order 1 or 2; from_wing != 0 selects the wing-side one-sided value at |x| = a. */
blb_status blb_profile_eval_y_deriv(const blb_profile* p, double x, int order, int from_wing,
                                    double* out);
blb_status blb_profile_contains(const blb_profile* p, double x, double y, int* out);
blb_status blb_profile_x_extent(const blb_profile* p, double* out);

/* ---- straightened operator coefficients --------------------------------- */

typedef struct {
    double A, B, det_g;
    double inv_g[4]; /* row-major 2x2 */
    double potential, c_yy, c_mix;
} blb_coeffs;

blb_status blb_coeffs_at(const blb_profile* p, double x, double y_prime, blb_coeffs* out);
blb_status blb_dx_coefficient_residual(const blb_profile* p, double x, double y_prime,
                                       double* out);
blb_status blb_dy_coefficient(const blb_profile* p, double x, double y_prime, double* out);

/* ---- cutoffs ------------------------------------------------------------ */

typedef struct blb_cutoff blb_cutoff;

/* chi == 1 on [-a,a], supported in |x| <= a + c * lambda^-p. */
blb_status blb_cutoff_create(double a, double lambda, double p, double c, blb_cutoff** out);
void blb_cutoff_destroy(blb_cutoff* c);
/* order 0 evaluates chi, orders 1..4 its derivatives. */
blb_status blb_cutoff_eval(const blb_cutoff* c, double x, int order, double* out);
/* C_m with |d^m chi| <= C_m lambda^(m p), m = 1..4 (cm must hold 4 doubles). */
blb_status blb_cutoff_constants(const blb_cutoff* c, double lambda, double p, double* cm);

/* ---- scaling ------------------------------------------------------------ */

blb_status blb_compute_s_delta(int k, double alpha, double delta, double* out);
/* OLS on (log lambda, log value); n >= 5, values > 0.  stderr_out may be NULL. */
blb_status blb_fit_exponent(const double* lambda, const double* value, int n, double* slope,
                            double* intercept, double* stderr_out);

/* ---- runs ---------------------------------------------------------------- */

/* Subcommands: validate-operator | eigs | separable | quasimode | mass-report |
 * scaling-fit.  Reads the config file, writes artifacts + manifest.json into
 * out_dir.  Returns BLB_OK and stores the process-style exit status (0/2/3)
 * in *exit_status. */
blb_status blb_run(const char* subcommand, const char* config_path, const char* out_dir,
                   int threads, int verbose, int* exit_status);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BILLAB_H */
