#include "billab/quasimode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "billab/massfunc.hpp"

namespace billab {

Quasimode build_bouncing_ball(int n, const Cutoff& chi, const Operator2D& op, double bc_tol) {
    if (n < 1) fail(Status::invalid_argument, "bouncing ball: n must be >= 1");
    const Grid& g = *op.grid;
    if (g.slice() != YSlice::full)
        fail(Status::invalid_argument, "bouncing ball: build on a full-domain grid");
    const DomainProfile& p = g.profile();
    if (!(p.a > 0.0))
        fail(Status::invalid_argument, "bouncing ball: domain has no rectangular part");
    if (chi.support_radius() > p.x_extent)
        fail(Status::invalid_argument, "bouncing ball: cutoff support exits the domain");
    chi.require_resolution(g.h());

    const double w = p.half_width;
    const double mu = n * std::numbers::pi / (2.0 * w); // transverse wavenumber; lambda
    // Dirichlet trace of the trial on the curved boundary, relative to max amplitude.
    double violation = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        const double cx = chi.value(g.x(i));
        if (cx == 0.0) continue;
        const double Y = eval_Y(p, g.x(i));
        violation = std::max(violation, cx * std::abs(std::sin(mu * (Y + w))));
    }
    if (violation > bc_tol)
        fail(Status::invalid_argument,
             "bouncing ball: trial violates the boundary condition beyond tolerance "
             "(cutoff support reaches too far into the wings)");

    Quasimode q;
    q.n = n;
    q.lambda = mu;
    q.chi_support = chi.support_radius();
    q.bc_violation = violation;
    q.field.grid = op.grid;
    q.field.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.nx()) * g.ny());
    for (int d = 0; d < g.n_interior(); ++d) {
        const int i = g.dof_i(d), j = g.dof_j(d);
        const double cx = chi.value(g.x(i));
        if (cx == 0.0) continue;
        q.field.values[g.node(i, j)] = cx * std::sin(mu * (g.y(j) + w));
    }
    const double nrm = q.field.norm_l2();
    if (!(nrm > 0.0)) fail(Status::invalid_argument, "bouncing ball: empty trial function");
    q.field.values /= nrm;
    q.residual = residual_check(op, q.field.to_dof(), mu * mu);
    return q;
}

std::vector<QuasimodeRow> residual_scaling(const DomainProfile& profile,
                                           const std::vector<int>& n_list,
                                           const ResidualScalingOptions& opts) {
    if (n_list.empty()) fail(Status::invalid_argument, "residual_scaling: empty n list");
    const double w = profile.half_width;
    std::vector<QuasimodeRow> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        const double lambda = n * std::numbers::pi / (2.0 * w);
        Cutoff chi = opts.p > 0.0
                         ? make_chi(CutoffSpec{profile.a, lambda, opts.p, opts.c})
                         : Cutoff(opts.fixed_inner * profile.a, 0.0,
                                  (opts.fixed_outer - opts.fixed_inner) * profile.a);
        double h = opts.h_override > 0.0
                       ? opts.h_override
                       : std::min(opts.max_lambda_h / lambda, chi.flank_width() / 10.0);
        h = std::min(h, profile.half_width / 16.0);
        // aligned rows keep the transverse factor an exact discrete eigenvector,
        // so the measured E carries no O(h lambda^3) boundary-row artifact
        Operator2D op =
            assemble_on(std::make_shared<Grid>(profile, h, YSlice::full, YAlign::aligned));
        Quasimode q = build_bouncing_ball(n, chi, op);
        const WingMasses m = wing_masses(q.field, q.lambda, profile.a);
        QuasimodeRow row;
        row.n = n;
        row.lambda = q.lambda;
        row.E = q.residual;
        row.M0 = m.M0;
        row.M1 = m.M1;
        row.M2 = m.M2;
        row.p = opts.p;
        row.c = opts.c;
        rows.push_back(row);
    }
    // Alarm: hypothesis E <= lambda^-eps0 satisfied yet the non-concentration
    // functional drops far below the sweep's typical level.
    std::vector<double> ts;
    for (const auto& r : rows)
        ts.push_back(std::max({r.M0, r.M1, r.M2}) * std::pow(r.lambda, 2.0 + opts.delta));
    std::vector<double> sorted = ts;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (size_t i = 0; i < rows.size(); ++i) {
        const bool hyp = rows[i].E <= std::pow(rows[i].lambda, -opts.eps0);
        rows[i].alarm = hyp && ts[i] < 0.01 * median;
    }
    return rows;
}

} // namespace billab
