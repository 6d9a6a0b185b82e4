#include "billab/separable1d.hpp"

#include <cmath>
#include <future>
#include <numbers>

#include <lapacke.h>

namespace billab {

ModeProblem make_mode_problem(int n, const DomainProfile& profile, double x_lo, double x_hi) {
    if (n < 1) fail(Status::invalid_argument, "mode problem: n must be >= 1");
    if (!(x_lo < x_hi)) fail(Status::invalid_argument, "mode problem: need x_lo < x_hi");
    if (x_lo < -profile.x_extent || x_hi > profile.x_extent)
        fail(Status::domain_error, "mode problem: interval exceeds the domain extent");
    ModeProblem mp{n, profile, x_lo, x_hi};
    // q_n must be finite on the closed interval
    for (double x : {x_lo, x_hi})
        if (eval_Y(profile, x) <= 0.0)
            fail(Status::degeneracy_error, "mode problem: Y vanishes at an interval end");
    return mp;
}

double potential(const ModeProblem& problem, double x) {
    if (x < problem.x_lo || x > problem.x_hi)
        fail(Status::domain_error, "potential: x outside the interval");
    const double Y = eval_Y(problem.profile, x);
    if (Y <= 0.0) fail(Status::degeneracy_error, "potential: Y(x) = 0");
    const double mu = problem.n * std::numbers::pi / 2.0;
    return mu * mu / (Y * Y);
}

std::vector<Mode1D> solve_modes(const ModeProblem& problem, double h, int count) {
    if (!(h > 0.0)) fail(Status::invalid_argument, "solve_modes: h must be positive");
    const double L = problem.x_hi - problem.x_lo;
    const int n_int = static_cast<int>(std::floor(L / h + 1e-9)) - 1;
    if (n_int < 3) fail(Status::invalid_argument, "solve_modes: interval too short for h");
    if (count < 1 || count > n_int)
        fail(Status::invalid_argument, "solve_modes: count exceeds grid size");
    const double hh = L / (n_int + 1); // snap so walls fall on lattice points
    const double x_mid = 0.5 * (problem.x_lo + problem.x_hi);
    // node positions mirror-exact about the midpoint, so symmetric problems get
    // bitwise-persymmetric matrices
    auto x_at = [&](int i) { return x_mid + ((i + 1) - 0.5 * (n_int + 1)) * hh; };

    std::vector<double> diag(n_int), off(std::max(0, n_int - 1));
    const double e = 1.0 / (hh * hh);
    for (int i = 0; i < n_int; ++i) {
        diag[i] = 2.0 * e + potential(problem, std::clamp(x_at(i), problem.x_lo, problem.x_hi));
        if (i + 1 < n_int) off[i] = -e;
    }

    std::vector<double> evals(n_int);
    std::vector<double> evecs(static_cast<size_t>(n_int) * count);
    std::vector<lapack_int> isuppz(2 * std::max(1, count));
    lapack_int m_found = 0;
    const lapack_int info = LAPACKE_dstevr(
        LAPACK_COL_MAJOR, 'V', 'I', n_int, diag.data(), off.data(), 0.0, 0.0, 1, count, 0.0,
        &m_found, evals.data(), evecs.data(), n_int, isuppz.data());
    if (info != 0 || m_found < count)
        fail(Status::solver_error, "solve_modes: tridiagonal eigensolver failed");

    std::vector<Mode1D> out(count);
    for (int k = 0; k < count; ++k) {
        Mode1D& m = out[k];
        m.lambda_sq = evals[k];
        m.lambda = std::sqrt(std::max(0.0, evals[k]));
        m.h = hh;
        m.x_lo = problem.x_lo;
        m.x_mid = x_mid;
        m.w = Eigen::Map<const Eigen::VectorXd>(&evecs[static_cast<size_t>(k) * n_int], n_int);
        m.w /= m.w.norm() * std::sqrt(hh); // L2(dx) normalization
    }
    return out;
}

namespace {
double wing_integral(const Mode1D& mode, double a, int side) {
    // trapezoid over interior nodes; wall values are zero
    double s = 0.0;
    const int n = static_cast<int>(mode.w.size());
    for (int i = 0; i < n; ++i) {
        const double x = mode.x_at(i);
        const bool in_wing = side > 0 ? (x > a) : (x < -a);
        if (in_wing) s += mode.w[i] * mode.w[i];
    }
    return s * mode.h;
}
} // namespace

double wing_mass_1d_left(const Mode1D& mode, double a) { return wing_integral(mode, a, -1); }
double wing_mass_1d_right(const Mode1D& mode, double a) { return wing_integral(mode, a, +1); }
double wing_mass_1d(const Mode1D& mode, double a) {
    return wing_mass_1d_left(mode, a) + wing_mass_1d_right(mode, a);
}

std::vector<SweepRow> sweep_scaling(const DomainProfile& profile, const std::vector<int>& n_list,
                                    double h_factor, double h_override, int threads,
                                    double wall_pullback) {
    for (size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            fail(Status::invalid_argument, "sweep_scaling: n_list must be ascending");
    if (!(wall_pullback > 0.0) || wall_pullback > 1.0)
        fail(Status::invalid_argument, "sweep_scaling: wall_pullback must be in (0,1]");

    double span = wall_pullback * profile.wing_span() * (1.0 - 1e-9);
    // keep the wall where Y is bounded below (the potential stays finite)
    const double y_floor = 0.1 * profile.half_width;
    if (eval_Y(profile, profile.a + span) < y_floor) {
        double lo = 0.0, hi = span;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (eval_Y(profile, profile.a + mid) >= y_floor ? lo : hi) = mid;
        }
        span = lo;
    }
    const double x_hi = profile.a + span;
    auto run_one = [&](int n) {
        ModeProblem mp = make_mode_problem(n, profile, -x_hi, x_hi);
        double q_max = 0.0;
        for (int s = 0; s <= 256; ++s)
            q_max = std::max(q_max, potential(mp, -x_hi + (2.0 * x_hi) * s / 256.0));
        const double h = h_override > 0.0 ? h_override : h_factor / std::sqrt(q_max);
        auto modes = solve_modes(mp, h, 1);
        SweepRow row;
        row.n = n;
        row.lambda = modes[0].lambda;
        row.lambda_sq = modes[0].lambda_sq;
        row.wing_mass_left = wing_mass_1d_left(modes[0], profile.a);
        row.wing_mass_right = wing_mass_1d_right(modes[0], profile.a);
        row.h = modes[0].h;
        return row;
    };

    std::vector<SweepRow> rows(n_list.size());
    if (threads <= 1) {
        for (size_t i = 0; i < n_list.size(); ++i) rows[i] = run_one(n_list[i]);
    } else {
        std::vector<std::future<SweepRow>> fut(n_list.size());
        for (size_t i = 0; i < n_list.size(); ++i)
            fut[i] = std::async(std::launch::async, run_one, n_list[i]);
        for (size_t i = 0; i < n_list.size(); ++i) rows[i] = fut[i].get();
    }
    return rows;
}

} // namespace billab
