#pragma once

#include <optional>
#include <string>

#include "billab/errors.hpp"

namespace billab {

// Partially rectangular domains  Omega = { (x,y) : |x| <= x_extent, |y| < Y(x) }
// with a flat rectangular part [-a,a] x (-half_width, half_width) and analytic
// wing families beyond |x| = a.  The width function is Y(x) = half_width + r(x)
// with r = 0 on [-a,a].

enum class WingKind {
    flat,     // r = 0 up to the x_extent wall
    stadium,  // semicircular cap: Y(x) = sqrt(w^2 - (|x|-a)^2), tip at |x| = a+w
    power,    // r = coeff * (|x|-a)^(k+alpha)
    gevrey,   // r = coeff * exp(-(|x|-a)^(-tau)), flat to infinite order at |x| = a
};

enum class SignConvention {
    opens_outward, // r > 0 beyond the rectangle (domain widens)
    closes_inward, // r < 0 beyond the rectangle (domain narrows)
};

struct WingProfile {
    WingKind kind = WingKind::flat;
    int k = 0;           // power: integer part of the regularity exponent
    double alpha = 0.0;  // power: Hoelder part, in [0,1]
    double coeff = 0.0;  // power/gevrey: signed amplitude
    double tau = 1.0;    // gevrey: exponent in exp(-t^-tau)

    SignConvention sign() const {
        return coeff >= 0.0 ? SignConvention::opens_outward : SignConvention::closes_inward;
    }
    double exponent() const { return static_cast<double>(k) + alpha; }
};

struct DomainProfile {
    double a = 1.0;
    double half_width = 0.0; // default pi, set by make_* constructors
    WingProfile left_wing;
    WingProfile right_wing;
    double x_extent = 0.0; // maximal |x|; a + wing span

    std::string id; // short tag used in CSV/report output

    double wing_span() const { return x_extent - a; }
};

DomainProfile make_stadium(double a, double half_width);
DomainProfile make_flat(double a, double half_width, double x_extent);
// Same wing family on both sides. power: k + alpha > 1, coeff != 0.
DomainProfile make_power(double a, double half_width, int k, double alpha, double coeff,
                         double wing_span);
DomainProfile make_gevrey(double a, double half_width, double tau, double coeff,
                          double wing_span);

// Y(x) = half_width + r(x).  Throws domain_error for |x| > x_extent.
double eval_Y(const DomainProfile& profile, double x);

// One-sided analytic derivative of Y, order 1 or 2.  At the corners x = +-a the
// rectangle side (zero) is returned unless from_wing is set.  Throws
// regularity_error when the requested one-sided derivative does not exist
// (order 2 at the corner with k + alpha < 2).
double eval_Y_deriv(const DomainProfile& profile, double x, int order, bool from_wing = false);

bool contains(const DomainProfile& profile, double x, double y);

// Largest value of Y over the domain (exact per wing family).
double max_Y(const DomainProfile& profile);

// Interior area by exact formulas where available, else adaptive quadrature of 2Y.
double domain_area(const DomainProfile& profile);

} // namespace billab
