#pragma once

#include <vector>

#include <Eigen/Core>

#include "billab/geometry.hpp"

namespace billab {

// Separated family of the comparison operator P~ = -d_x^2 - Y^-2 d_y^2 on the
// straightened strip: transverse mode sin(n pi (y'+1)/2) turns it into the 1D
// Schroedinger problem -w'' + q_n w = lambda^2 w with q_n = (n pi / 2)^2 / Y^2,
// Dirichlet walls at the interval ends.
struct ModeProblem {
    int n = 1;
    DomainProfile profile;
    double x_lo = 0.0, x_hi = 0.0;
};

ModeProblem make_mode_problem(int n, const DomainProfile& profile, double x_lo, double x_hi);

double potential(const ModeProblem& problem, double x);

struct Mode1D {
    double lambda_sq = 0.0;
    double lambda = 0.0;
    Eigen::VectorXd w; // interior node values, normalized in L2(dx)
    double h = 0.0;
    double x_lo = 0.0;  // first interior node at x_lo + h
    double x_mid = 0.0; // interval midpoint; node positions are mirror-exact around it

    // i-th interior node; bitwise mirror-symmetric for symmetric intervals
    double x_at(int i) const {
        return x_mid + ((i + 1) - 0.5 * (static_cast<int>(w.size()) + 1)) * h;
    }
};

// Lowest `count` eigenpairs of the symmetric tridiagonal discretization
// (LAPACK selected-eigenpair tridiagonal solve).
std::vector<Mode1D> solve_modes(const ModeProblem& problem, double h, int count);

// Integral of |w|^2 over {|x| > a} (trapezoid); the pair must be normalized.
double wing_mass_1d(const Mode1D& mode, double a);
double wing_mass_1d_left(const Mode1D& mode, double a);
double wing_mass_1d_right(const Mode1D& mode, double a);

struct SweepRow {
    int n = 0;
    double lambda = 0.0;
    double lambda_sq = 0.0;
    double wing_mass_left = 0.0;
    double wing_mass_right = 0.0;
    double h = 0.0;
};

// Lowest mode per n; h chosen as h_factor / sqrt(max q_n) unless h_override > 0.
// Dirichlet walls sit at +-(a + wall_pullback * wing_span), pulled in further
// where Y drops below a tenth of the half width (stadium tips).
std::vector<SweepRow> sweep_scaling(const DomainProfile& profile, const std::vector<int>& n_list,
                                    double h_factor = 0.1, double h_override = 0.0,
                                    int threads = 1, double wall_pullback = 1.0);

} // namespace billab
