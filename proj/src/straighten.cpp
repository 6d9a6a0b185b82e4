#include "billab/straighten.hpp"

#include <cmath>
#include <vector>

namespace billab {

namespace {

struct YBundle {
    double Y, Yp, Ypp;
};

YBundle y_bundle(const DomainProfile& p, double x, bool need_second = true) {
    YBundle b;
    b.Y = eval_Y(p, x);
    if (b.Y <= 0.0)
        fail(Status::degeneracy_error, "straighten: Y(x) = 0, metric degenerates");
    const bool wing = std::abs(x) > p.a;
    b.Yp = eval_Y_deriv(p, x, 1, wing);
    b.Ypp = need_second ? eval_Y_deriv(p, x, 2, wing) : 0.0;
    return b;
}

// Cubic Lagrange interpolation on a uniform lattice; out-of-range samples are 0.
double interp_cubic(const std::vector<double>& col, double s) {
    const int n = static_cast<int>(col.size());
    const int k0 = static_cast<int>(std::floor(s));
    auto at = [&](int k) { return (k < 0 || k >= n) ? 0.0 : col[k]; };
    const double t = s - k0;
    const double fm1 = at(k0 - 1), f0 = at(k0), f1 = at(k0 + 1), f2 = at(k0 + 2);
    return fm1 * (-t * (t - 1.0) * (t - 2.0) / 6.0) + f0 * ((t * t - 1.0) * (t - 2.0) / 2.0) +
           f1 * (-t * (t + 1.0) * (t - 2.0) / 2.0) + f2 * (t * (t * t - 1.0) / 6.0);
}

} // namespace

StraightenedCoeffs coeffs_at(const DomainProfile& profile, double x, double y_prime) {
    const YBundle b = y_bundle(profile, x);
    StraightenedCoeffs c;
    c.A = (y_prime * b.Yp) * (y_prime * b.Yp);
    c.B = y_prime * b.Yp * b.Y;
    c.det_g = b.Y * b.Y;
    const double inv_det = 1.0 / c.det_g;
    c.inv_g[0][0] = 1.0;
    c.inv_g[0][1] = c.inv_g[1][0] = -c.B * inv_det;
    c.inv_g[1][1] = (1.0 + c.A) * inv_det;
    c.potential = -0.5 * b.Ypp / b.Y + 0.75 * b.Yp * b.Yp / (b.Y * b.Y);
    c.c_yy = (1.0 + c.A) / c.det_g;
    c.c_mix = c.B / c.det_g;
    return c;
}

double dx_coefficient_residual(const DomainProfile& profile, double x, double y_prime) {
    const YBundle b = y_bundle(profile, x, false);
    const double y1 = 0.5 * y_prime - 0.5;
    const double y2 = 0.5 * y_prime + 0.5;
    auto b_over_y = [&](double yp) { return yp * b.Yp * b.Y / b.Y; };
    const double slope = (b_over_y(y2) - b_over_y(y1)) / (y2 - y1);
    return b.Yp / b.Y - slope / b.Y;
}

double dy_coefficient(const DomainProfile& profile, double x, double y_prime) {
    const YBundle b = y_bundle(profile, x);
    const double d = b.Ypp / (b.Y * b.Y) - 2.0 * b.Yp * b.Yp / (b.Y * b.Y * b.Y); // (Y'/Y^2)_x
    return -y_prime * b.Y * d;
}

double dy_coefficient_unsimplified(const DomainProfile& profile, double x, double y_prime) {
    const YBundle b = y_bundle(profile, x);
    const double dBY_dx = y_prime * b.Ypp;                              // (B/Y)_x
    const double dAY_dy = 2.0 * y_prime * b.Yp * b.Yp / b.Y;            // ((1+A)/Y)_y
    return (-dBY_dx + dAY_dy) / b.Y;
}

double StripField::norm_l2() const {
    const auto& g = *grid;
    const double hy = g.hy();
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        const double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
        for (int i = 0; i < g.nx; ++i) {
            const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
            const double v = values[g.node(i, j)];
            s += wx * wy * v * v;
        }
    }
    return std::sqrt(s * g.hx * hy);
}

std::shared_ptr<const StripGrid> make_strip_grid(const Grid& g, double margin, int ny) {
    if (!(margin >= 0.0)) fail(Status::invalid_argument, "strip: margin must be >= 0");
    const DomainProfile& p = g.profile();
    const double xr = p.a + margin;
    int i_lo = g.nx(), i_hi = -1;
    for (int i = 0; i < g.nx(); ++i)
        if (std::abs(g.x(i)) <= xr) {
            i_lo = std::min(i_lo, i);
            i_hi = std::max(i_hi, i);
        }
    if (i_hi < i_lo) fail(Status::invalid_argument, "strip: no grid columns in |x| <= a+margin");
    for (int i = i_lo; i <= i_hi; ++i)
        if (eval_Y(p, g.x(i)) <= 0.0)
            fail(Status::degeneracy_error, "strip: Y vanishes inside the requested x-range");

    auto sg = std::make_shared<StripGrid>();
    sg->x_lo = g.x(i_lo);
    sg->hx = g.h();
    sg->nx = i_hi - i_lo + 1;
    sg->ny = ny > 0 ? ny : 2 * static_cast<int>(std::ceil(p.half_width / g.h())) + 1;
    if (sg->ny < 5) fail(Status::resolution_error, "strip: ny too small");
    return sg;
}

Eigen::SparseMatrix<double> assemble_tilde_delta(const StripGrid& sg,
                                                 const DomainProfile& profile) {
    const int nx = sg.nx, ny = sg.ny;
    const double hx = sg.hx, hy = sg.hy();
    // Dirichlet strip: dof rows are j = 1 .. ny-2.
    const int nrows = ny - 2;
    auto dof = [&](int i, int j) { return (j - 1) * nx + i; };
    const int n = nx * nrows;

    // Wings must be resolved if the strip reaches into them.
    int wing_cols = 0;
    bool reaches_wing = false;
    for (int i = 0; i < nx; ++i) {
        if (std::abs(sg.x(i)) > profile.a) ++wing_cols;
    }
    reaches_wing = std::abs(sg.x(0)) > profile.a || std::abs(sg.x(nx - 1)) > profile.a;
    if (reaches_wing && wing_cols < 16) // two wings, >= 8 columns each
        fail(Status::resolution_error, "strip: fewer than 8 grid points across a wing");

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(n) * 9);

    std::vector<double> Yv(nx), Ypv(nx), Vv(nx);
    for (int i = 0; i < nx; ++i) {
        const StraightenedCoeffs c0 = coeffs_at(profile, sg.x(i), 0.0);
        const YBundle b = y_bundle(profile, sg.x(i));
        Yv[i] = b.Y;
        Ypv[i] = b.Yp;
        Vv[i] = c0.potential;
    }
    // c_yy at the y-half-levels, computed once so both flux sides share bits
    std::vector<double> chalf(static_cast<size_t>(nx) * (ny - 1));
    for (int j = 0; j < ny - 1; ++j) {
        const double yp_half = -1.0 + (j + 0.5) * hy;
        for (int i = 0; i < nx; ++i)
            chalf[static_cast<size_t>(j) * nx + i] =
                (1.0 + (yp_half * Ypv[i]) * (yp_half * Ypv[i])) / (Yv[i] * Yv[i]);
    }

    const double ex = 1.0 / (hx * hx), ey = 1.0 / (hy * hy);
    for (int j = 1; j <= ny - 2; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int q = dof(i, j);
            // x second difference (Dirichlet ghosts beyond the strip ends)
            trip.emplace_back(q, q, 2.0 * ex);
            if (i + 1 < nx) trip.emplace_back(q, dof(i + 1, j), -ex);
            if (i - 1 >= 0) trip.emplace_back(q, dof(i - 1, j), -ex);
            // y flux form with c_yy at half levels
            const double a_up = chalf[static_cast<size_t>(j) * nx + i];
            const double a_dn = chalf[static_cast<size_t>(j - 1) * nx + i];
            trip.emplace_back(q, q, (a_up + a_dn) * ey);
            if (j + 1 <= ny - 2) trip.emplace_back(q, dof(i, j + 1), -a_up * ey);
            if (j - 1 >= 1) trip.emplace_back(q, dof(i, j - 1), -a_dn * ey);
            // mixed divergence blocks, assembled in symmetric pairs
            const double cmix = sg.yp(j) * Ypv[i] / Yv[i];
            if (cmix != 0.0) {
                for (int sx = -1; sx <= 1; sx += 2) {
                    const int ir = i + sx;
                    if (ir < 0 || ir >= nx) continue;
                    for (int sy = -1; sy <= 1; sy += 2) {
                        const int jc = j + sy;
                        if (jc < 1 || jc > ny - 2) continue;
                        const double val = -cmix * (sx / (2.0 * hx)) * (sy / (2.0 * hy));
                        trip.emplace_back(dof(ir, j), dof(i, jc), val);
                        trip.emplace_back(dof(i, jc), dof(ir, j), val);
                    }
                }
            }
            // potential (multiplication) term of -Delta~
            trip.emplace_back(q, q, -Vv[i]);
        }
    }

    Eigen::SparseMatrix<double> M(n, n);
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();
    return M;
}

StripField apply_tilde_delta(const StripField& v, const DomainProfile& profile) {
    const auto& sg = *v.grid;
    const Eigen::SparseMatrix<double> M = assemble_tilde_delta(sg, profile);
    const int nx = sg.nx, ny = sg.ny;
    Eigen::VectorXd vd(nx * (ny - 2));
    for (int j = 1; j <= ny - 2; ++j)
        for (int i = 0; i < nx; ++i) vd[(j - 1) * nx + i] = v.values[sg.node(i, j)];
    const Eigen::VectorXd w = M * vd;
    StripField out;
    out.grid = v.grid;
    out.values = Eigen::VectorXd::Zero(sg.size());
    for (int j = 1; j <= ny - 2; ++j)
        for (int i = 0; i < nx; ++i) out.values[sg.node(i, j)] = -w[(j - 1) * nx + i];
    return out;
}

StripField apply_tilde_delta_raw(const StripField& v, const DomainProfile& profile) {
    const auto& sg = *v.grid;
    const int nx = sg.nx, ny = sg.ny;
    const double hx = sg.hx, hy = sg.hy();
    StripField out;
    out.grid = v.grid;
    out.values = Eigen::VectorXd::Zero(sg.size());
    auto at = [&](int i, int j) -> double {
        if (i < 0 || i >= nx || j < 0 || j >= ny) return 0.0;
        return v.values[sg.node(i, j)];
    };
    for (int j = 1; j <= ny - 2; ++j) {
        const double yp = sg.yp(j);
        for (int i = 0; i < nx; ++i) {
            const double x = sg.x(i);
            const StraightenedCoeffs c = coeffs_at(profile, x, yp);
            const YBundle b = y_bundle(profile, x);
            const double vc = at(i, j);
            const double vx = (at(i + 1, j) - at(i - 1, j)) / (2 * hx);
            const double vy = (at(i, j + 1) - at(i, j - 1)) / (2 * hy);
            const double vxx = (at(i + 1, j) - 2 * vc + at(i - 1, j)) / (hx * hx);
            const double vyy = (at(i, j + 1) - 2 * vc + at(i, j - 1)) / (hy * hy);
            const double vxy = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) +
                                at(i - 1, j - 1)) /
                               (4 * hx * hy);
            const double dy_coef = c.B * b.Yp / (b.Y * b.Y * b.Y) + dy_coefficient(profile, x, yp);
            out.values[sg.node(i, j)] = vxx + c.c_yy * vyy - 2.0 * c.c_mix * vxy -
                                        (b.Yp / b.Y) * vx + dy_coef * vy + c.potential * vc;
        }
    }
    return out;
}

StripField conjugate_to_v(const Field& u, const std::shared_ptr<const StripGrid>& sg) {
    const Grid& g = *u.grid;
    StripField v;
    v.grid = sg;
    v.values = Eigen::VectorXd::Zero(sg->size());
    const double h = g.h();
    std::vector<double> col(g.ny());
    for (int i = 0; i < sg->nx; ++i) {
        const double x = sg->x(i);
        const double ip_real = (x - g.origin_x()) / h;
        const int ip = static_cast<int>(std::lround(ip_real));
        if (ip < 0 || ip >= g.nx() || std::abs(ip_real - ip) > 1e-9)
            fail(Status::invalid_argument, "conjugate_to_v: strip columns must lie on the grid");
        const double Y = eval_Y(g.profile(), x);
        if (Y <= 0.0) fail(Status::degeneracy_error, "conjugate_to_v: Y = 0 in strip range");
        const double sqY = std::sqrt(Y);
        for (int k = 0; k < g.ny(); ++k) col[k] = u.values[g.node(ip, k)];
        for (int j = 1; j <= sg->ny - 2; ++j) {
            const double y = sg->yp(j) * Y;
            const double s = (y - g.origin_y()) / h;
            v.values[sg->node(i, j)] = sqY * interp_cubic(col, s);
        }
    }
    return v;
}

Field conjugate_to_u(const StripField& v, const GridPtr& g) {
    const auto& sg = *v.grid;
    Field u;
    u.grid = g;
    u.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g->nx()) * g->ny());
    const double h = g->h();
    const double x_hi = sg.x(sg.nx - 1) + 0.5 * h * 1e-6;
    std::vector<double> col(sg.ny);
    for (int i = 0; i < g->nx(); ++i) {
        const double x = g->x(i);
        if (x < sg.x_lo - 1e-12 || x > x_hi) continue;
        const double is_real = (x - sg.x_lo) / sg.hx;
        const int is = static_cast<int>(std::lround(is_real));
        if (is < 0 || is >= sg.nx || std::abs(is_real - is) > 1e-9) continue;
        const double Y = eval_Y(g->profile(), x);
        if (Y <= 0.0) fail(Status::degeneracy_error, "conjugate_to_u: Y = 0 in strip range");
        const double inv_sqY = 1.0 / std::sqrt(Y);
        for (int k = 0; k < sg.ny; ++k) col[k] = v.values[sg.node(is, k)];
        for (int j = 0; j < g->ny(); ++j) {
            if (!g->interior(i, j)) continue;
            const double yp = g->y(j) / Y;
            if (std::abs(yp) >= 1.0) continue;
            const double s = (yp + 1.0) / sg.hy();
            u.values[g->node(i, j)] = inv_sqY * interp_cubic(col, s);
        }
    }
    return u;
}

double transform_dx(double v, double vx, double vy, const DomainProfile& profile, double x,
                    double y_prime) {
    const YBundle b = y_bundle(profile, x, false);
    const double sq = std::sqrt(b.Y);
    return -0.5 * b.Yp / (b.Y * sq) * v + (vx - vy * y_prime * b.Yp / b.Y) / sq;
}

double transform_dxx(double v, double vx, double vy, double vxx, double vxy, double vyy,
                     const DomainProfile& profile, double x, double y_prime) {
    const YBundle b = y_bundle(profile, x);
    const double Y = b.Y, Yp = b.Yp, Ypp = b.Ypp;
    const double sq = std::sqrt(Y);
    const double g = y_prime * Yp / Y; // d(y')/dx = -g at fixed y
    const double c_v = -0.5 * Ypp / (Y * sq) + 0.75 * Yp * Yp / (Y * Y * sq);
    const double c_vx = -Yp / (Y * sq);
    const double c_vy = y_prime * (3.0 * Yp * Yp / (Y * Y) - Ypp / Y) / sq;
    return c_v * v + c_vx * vx + c_vy * vy + (vxx - 2.0 * vxy * g + vyy * g * g) / sq;
}

} // namespace billab
