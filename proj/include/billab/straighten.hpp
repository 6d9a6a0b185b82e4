#pragma once

#include <memory>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "billab/geometry.hpp"
#include "billab/grid.hpp"

namespace billab {

// Coefficient bundle of the straightened, conjugated operator at one point
// (x, y') of the strip.  With Y = Y(x), Yp = Y', Ypp = Y'':
//   A = (y' Yp)^2, B = y' Yp Y, det g = Y^2,
//   potential = -Ypp/(2Y) + 3 Yp^2 / (4 Y^2),
//   c_yy = (1+A)/Y^2, c_mix = B/Y^2.
struct StraightenedCoeffs {
    double A = 0.0;
    double B = 0.0;
    double det_g = 0.0;
    double inv_g[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double potential = 0.0;
    double c_yy = 0.0;
    double c_mix = 0.0;
};

// Analytic evaluation from the profile's one-sided derivatives (rectangle side
// exactly at |x| = a).  Throws degeneracy_error when Y(x) = 0.
StraightenedCoeffs coeffs_at(const DomainProfile& profile, double x, double y_prime);

// Computed value of Y'/Y - (1/Y) d/dy'(B/Y); contract |value| <= 1e-12.
// The y' derivative is taken as an exact secant (B is linear in y').
double dx_coefficient_residual(const DomainProfile& profile, double x, double y_prime);

// Coefficient of d_y in -Delta_g, simplified form -y' Y (Y'/Y^2)_x.
double dy_coefficient(const DomainProfile& profile, double x, double y_prime);
// Same quantity assembled from the unsimplified expression
// (1/Y) ( -(B/Y)_x + ((1+A)/Y)_y ); agrees with dy_coefficient to ~1e-10.
double dy_coefficient_unsimplified(const DomainProfile& profile, double x, double y_prime);

// Tensor grid on the straightened strip [x_lo, x_hi] x [-1, 1]; y' rows include
// the Dirichlet lines y' = +-1.
struct StripGrid {
    double x_lo = 0.0, hx = 0.0;
    int nx = 0;
    int ny = 0; // >= 3, odd recommended
    double hy() const { return 2.0 / (ny - 1); }
    double x(int i) const { return x_lo + i * hx; }
    double yp(int j) const { return -1.0 + j * hy(); }
    int node(int i, int j) const { return j * nx + i; }
    int size() const { return nx * ny; }
};

struct StripField {
    std::shared_ptr<const StripGrid> grid;
    Eigen::VectorXd values; // size nx*ny

    double norm_l2() const; // trapezoid L2(dx dy')
};

// Strip grid spanning |x| <= a + margin with Y bounded below; columns are laid
// on the same x-lattice as `g`.  ny is derived from g's spacing unless given.
std::shared_ptr<const StripGrid> make_strip_grid(const Grid& g, double margin, int ny = 0);

// Divergence-form discretization of -Delta~ on the strip (Dirichlet all around);
// symmetric by construction.
Eigen::SparseMatrix<double> assemble_tilde_delta(const StripGrid& sg, const DomainProfile& profile);

// Delta~ v via the assembled flux form.  Throws resolution_error for grids with
// fewer than 8 interior columns across a wing.
StripField apply_tilde_delta(const StripField& v, const DomainProfile& profile);

// Delta~ v via the raw (pre-divergence) conjugated expression with centered
// differences; cross-check oracle for the flux form.
StripField apply_tilde_delta_raw(const StripField& v, const DomainProfile& profile);

// T u = Y^(1/2) u(x, y' Y) and its inverse; cubic interpolation in the resampled
// direction.  Throws degeneracy_error when Y vanishes in the strip's x-range.
StripField conjugate_to_v(const Field& u, const std::shared_ptr<const StripGrid>& sg);
Field conjugate_to_u(const StripField& v, const GridPtr& g);

// Physical x-derivatives from strip-side samples (exact chain rule).
double transform_dx(double v, double vx, double vy, const DomainProfile& profile, double x,
                    double y_prime);
double transform_dxx(double v, double vx, double vy, double vxx, double vxy, double vyy,
                     const DomainProfile& profile, double x, double y_prime);

} // namespace billab
