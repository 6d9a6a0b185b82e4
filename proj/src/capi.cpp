#include "billab.h"

#include <cstring>
#include <string>

#include "billab/config.hpp"
#include "billab/cutoff.hpp"
#include "billab/errors.hpp"
#include "billab/geometry.hpp"
#include "billab/runner.hpp"
#include "billab/scaling.hpp"
#include "billab/straighten.hpp"

namespace {

thread_local std::string g_last_error;

blb_status set_error(const billab::Error& e) {
    g_last_error = e.what();
    return static_cast<blb_status>(e.code());
}

template <typename F>
blb_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return BLB_OK;
    } catch (const billab::Error& e) {
        return set_error(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BLB_EINTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return BLB_EINTERNAL;
    }
}

} // namespace

struct blb_profile {
    billab::DomainProfile p;
};
struct blb_cutoff {
    billab::Cutoff c;
};

extern "C" {

const char* blb_version(void) { return "0.1.0"; }

const char* blb_status_name(blb_status s) {
    switch (s) {
    case BLB_OK: return "ok";
    case BLB_EINVAL: return "invalid argument";
    case BLB_EDOMAIN: return "domain error";
    case BLB_EREGULARITY: return "regularity error";
    case BLB_EDEGENERATE: return "degeneracy error";
    case BLB_ERESOLUTION: return "resolution error";
    case BLB_ESOLVER: return "solver error";
    case BLB_EIO: return "io error";
    case BLB_EDATA: return "insufficient data";
    case BLB_ECONFIG: return "config error";
    default: return "internal error";
    }
}

const char* blb_last_error(void) { return g_last_error.c_str(); }

blb_status blb_profile_create_stadium(double a, double half_width, blb_profile** out) {
    if (!out) return BLB_EINVAL;
    return guarded([&] { *out = new blb_profile{billab::make_stadium(a, half_width)}; });
}

blb_status blb_profile_create_flat(double a, double half_width, double x_extent,
                                   blb_profile** out) {
    if (!out) return BLB_EINVAL;
    return guarded([&] { *out = new blb_profile{billab::make_flat(a, half_width, x_extent)}; });
}

blb_status blb_profile_create_power(double a, double half_width, int k, double alpha,
                                    double coeff, double wing_span, blb_profile** out) {
    if (!out) return BLB_EINVAL;
    return guarded(
        [&] { *out = new blb_profile{billab::make_power(a, half_width, k, alpha, coeff, wing_span)}; });
}

blb_status blb_profile_create_gevrey(double a, double half_width, double tau, double coeff,
                                     double wing_span, blb_profile** out) {
    if (!out) return BLB_EINVAL;
    return guarded(
        [&] { *out = new blb_profile{billab::make_gevrey(a, half_width, tau, coeff, wing_span)}; });
}

void blb_profile_destroy(blb_profile* p) { delete p; }

blb_status blb_profile_eval_y(const blb_profile* p, double x, double* out) {
    if (!p || !out) return BLB_EINVAL;
    return guarded([&] { *out = billab::eval_Y(p->p, x); });
}

blb_status blb_profile_eval_y_deriv(const blb_profile* p, double x, int order, int from_wing,
                                    double* out) {
    if (!p || !out) return BLB_EINVAL;
    return guarded([&] { *out = billab::eval_Y_deriv(p->p, x, order, from_wing != 0); });
}

blb_status blb_profile_contains(const blb_profile* p, double x, double y, int* out) {
    if (!p || !out) return BLB_EINVAL;
    return guarded([&] { *out = billab::contains(p->p, x, y) ? 1 : 0; });
}

blb_status blb_profile_x_extent(const blb_profile* p, double* out) {
    if (!p || !out) return BLB_EINVAL;
    *out = p->p.x_extent;
    return BLB_OK;
}

blb_status blb_coeffs_at(const blb_profile* p, double x, double y_prime, blb_coeffs* out) {
    if (!p || !out) return BLB_EINVAL;
    return guarded([&] {
        const billab::StraightenedCoeffs c = billab::coeffs_at(p->p, x, y_prime);
        out->A = c.A;
        out->B = c.B;
        out->det_g = c.det_g;
        out->inv_g[0] = c.inv_g[0][0];
        out->inv_g[1] = c.inv_g[0][1];
        out->inv_g[2] = c.inv_g[1][0];
        out->inv_g[3] = c.inv_g[1][1];
        out->potential = c.potential;
        out->c_yy = c.c_yy;
        out->c_mix = c.c_mix;
    });
}

blb_status blb_dx_coefficient_residual(const blb_profile* p, double x, double y_prime,
                                       double* out) {
    if (!p || !out) return BLB_EINVAL;
    return guarded([&] { *out = billab::dx_coefficient_residual(p->p, x, y_prime); });
}

blb_status blb_dy_coefficient(const blb_profile* p, double x, double y_prime, double* out) {
    if (!p || !out) return BLB_EINVAL;
    return guarded([&] { *out = billab::dy_coefficient(p->p, x, y_prime); });
}

blb_status blb_cutoff_create(double a, double lambda, double p, double c, blb_cutoff** out) {
    if (!out) return BLB_EINVAL;
    return guarded([&] { *out = new blb_cutoff{billab::make_chi({a, lambda, p, c})}; });
}

void blb_cutoff_destroy(blb_cutoff* c) { delete c; }

blb_status blb_cutoff_eval(const blb_cutoff* c, double x, int order, double* out) {
    if (!c || !out) return BLB_EINVAL;
    return guarded([&] { *out = order == 0 ? c->c.value(x) : c->c.deriv(x, order); });
}

blb_status blb_cutoff_constants(const blb_cutoff* c, double lambda, double p, double* cm) {
    if (!c || !cm) return BLB_EINVAL;
    return guarded([&] {
        const auto m = c->c.measured_constants(lambda, p);
        for (int i = 0; i < 4; ++i) cm[i] = m[i + 1];
    });
}

blb_status blb_compute_s_delta(int k, double alpha, double delta, double* out) {
    if (!out) return BLB_EINVAL;
    return guarded([&] { *out = billab::compute_s_delta(k, alpha, delta); });
}

blb_status blb_fit_exponent(const double* lambda, const double* value, int n, double* slope,
                            double* intercept, double* stderr_out) {
    if (!lambda || !value || !slope || !intercept || n < 0) return BLB_EINVAL;
    return guarded([&] {
        std::vector<std::pair<double, double>> pts(n);
        for (int i = 0; i < n; ++i) pts[i] = {lambda[i], value[i]};
        const billab::ScalingFit fit = billab::fit_exponent(pts);
        *slope = fit.slope;
        *intercept = fit.intercept;
        if (stderr_out) *stderr_out = fit.stderr_slope;
    });
}

blb_status blb_run(const char* subcommand, const char* config_path, const char* out_dir,
                   int threads, int verbose, int* exit_status) {
    if (!subcommand || !config_path || !out_dir || !exit_status) return BLB_EINVAL;
    g_last_error.clear();
    try {
        billab::RunContext ctx;
        try {
            ctx.cfg = billab::parse_config(config_path);
        } catch (const billab::Error& e) {
            g_last_error = e.what();
            *exit_status = 2;
            return BLB_OK;
        }
        ctx.out_dir = *out_dir ? out_dir
                               : (ctx.cfg.out_dir.empty() ? std::string(".") : ctx.cfg.out_dir);
        ctx.threads = threads > 0 ? threads : 1;
        ctx.verbose = verbose != 0;
        try {
            *exit_status = billab::run_subcommand(subcommand, ctx);
        } catch (const billab::Error& e) {
            g_last_error = e.what();
            *exit_status = e.code() == billab::Status::config_error ? 2 : 3;
        }
        return BLB_OK;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BLB_EINTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return BLB_EINTERNAL;
    }
}

} // extern "C"
