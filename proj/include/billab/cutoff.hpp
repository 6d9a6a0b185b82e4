#pragma once

#include <array>
#include <vector>

#include "billab/errors.hpp"

namespace billab {

// Ramp R(x) = max(x - a, 0) and its a.e. derivative H = 1_{x > a} (right wing).
double ramp(double x, double a);
double heaviside(double x, double a);

struct CutoffSpec {
    double a = 1.0;
    double lambda = 1.0; // > 0
    double p = 1.0;      // in (0,1] for the general case; 1 + eps0/2 runs are allowed too
    double c = 1.0;      // support multiplier, >= 1
};

// Even cutoff built from the mollifier bump exp(-1/(1-t^2)): identically 1 on
// {|x| <= a + inner}, identically 0 on {|x| >= a + outer}, smooth in between.
class Cutoff {
public:
    Cutoff(double a, double inner, double outer);

    double operator()(double x) const { return value(x); }
    double value(double x) const;
    double deriv(double x, int order) const; // order 1..4

    double a() const { return a_; }
    double inner_radius() const { return a_ + inner_; }
    double support_radius() const { return a_ + outer_; }
    double flank_width() const { return outer_ - inner_; }

    // Sampled sup of |d^m chi| over the flank, m = 0..4.
    std::array<double, 5> sampled_derivative_maxima() const;
    // C_m such that |d^m chi| <= C_m lambda^{m p}, measured by sampling.
    std::array<double, 5> measured_constants(double lambda, double p) const;

    // Throws resolution_error when the flank spans fewer than min_cells grid cells.
    void require_resolution(double h, int min_cells = 4) const;

private:
    double a_, inner_, outer_;
};

Cutoff make_chi(const CutoffSpec& spec);       // 1 on [-a,a], support a + c lambda^-p
Cutoff make_psi(const CutoffSpec& spec);       // 1 on supp chi, support a + 3c lambda^-p
Cutoff make_psi_tilde(const CutoffSpec& spec); // 1 on supp psi, support a + 6c lambda^-p

} // namespace billab
