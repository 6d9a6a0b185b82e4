#pragma once

#include <vector>

#include "billab/cutoff.hpp"
#include "billab/eigensolver2d.hpp"
#include "billab/grid.hpp"

namespace billab {

// Bouncing-ball trial function u = chi(x) sin(n pi (y + w) / (2 w)), lambda = n pi / (2 w)
// (= n/2 at the default half width pi), normalized on the grid.
struct Quasimode {
    Field field;
    double lambda = 0.0;
    double residual = 0.0;      // measured E(lambda) against the discrete operator
    int n = 0;
    double chi_support = 0.0;   // support radius of the cutoff used
    double bc_violation = 0.0;  // max |trial| on the cut boundary relative to max |trial|
};

// Throws construction errors when chi's support exits the domain or the trial
// misses the Dirichlet condition by more than bc_tol (relative).
Quasimode build_bouncing_ball(int n, const Cutoff& chi, const Operator2D& op,
                              double bc_tol = 1e-2);

struct QuasimodeRow {
    int n = 0;
    double lambda = 0.0;
    double E = 0.0;
    double M0 = 0.0, M1 = 0.0, M2 = 0.0;
    double p = 0.0, c = 0.0;
    bool alarm = false;
};

struct ResidualScalingOptions {
    double p = 0.0;        // 0: fixed cutoff (lambda-independent)
    double c = 1.0;        // support multiplier; for fixed cutoffs the reach is c * flank
    double fixed_inner = 0.5;  // fixed cutoff: chi == 1 on |x| <= fixed_inner * a
    double fixed_outer = 0.9;  // fixed cutoff: supp chi in |x| <= fixed_outer * a
    double eps0 = 0.5;
    double delta = 0.1;
    double max_lambda_h = 0.2; // grid policy h = max_lambda_h / lambda
    double h_override = 0.0;
};

// Per-n: build the quasimode on a lambda-refined grid, measure E and the wing
// masses; alarm rows violate the non-concentration trend while E is small.
std::vector<QuasimodeRow> residual_scaling(const DomainProfile& profile,
                                           const std::vector<int>& n_list,
                                           const ResidualScalingOptions& opts);

} // namespace billab
