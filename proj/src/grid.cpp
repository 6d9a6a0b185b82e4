#include "billab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace billab {

namespace {

constexpr double kThetaFloor = 1e-6;

// Fractional distance along +-x from an interior node to the boundary curve or
// wall, given that (x + dir*h, y) is exterior or beyond the wall.
double cut_distance_x(const DomainProfile& p, double x, double y, double dir, double h) {
    const double wall = p.x_extent;
    const double t_hi = std::min(h, dir > 0 ? wall - x : wall + x);
    const double ay = std::abs(y);
    auto inside = [&](double t) {
        const double xx = std::clamp(x + dir * t, -wall, wall); // FP guard at the wall
        return eval_Y(p, xx) > ay;
    };
    if (inside(t_hi)) return std::max(kThetaFloor, t_hi / h); // exits through the wall
    double lo = 0.0, hi = t_hi;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
    }
    return std::max(kThetaFloor, 0.5 * (lo + hi) / h);
}

} // namespace

Grid::Grid(const DomainProfile& profile, double h, YSlice slice, YAlign align)
    : profile_(profile), h_(h), slice_(slice) {
    if (!(h > 0.0)) fail(Status::invalid_argument, "grid: h must be positive");
    if (align == YAlign::aligned) {
        if (slice != YSlice::full)
            fail(Status::invalid_argument, "grid: aligned rows require the full slice");
        const int K = std::max(2, static_cast<int>(std::lround(profile.half_width / h)));
        h_ = profile.half_width / K;
    }
    const double X = profile.x_extent;
    const double Ymax = max_Y(profile);
    const int mx = static_cast<int>(std::floor(X / h_ - 1e-9));
    if (align == YAlign::aligned) {
        const int K = static_cast<int>(std::lround(profile.half_width / h_));
        const int extra =
            std::max(0, static_cast<int>(std::ceil((Ymax - profile.half_width) / h_ - 1e-9)));
        if (mx < 1 || K < 2)
            fail(Status::invalid_argument, "grid: spacing too coarse for the domain");
        nx_ = 2 * mx + 1;
        x0_ = -mx * h_;
        const int m = K - 1 + extra; // rows strictly inside (-Ymax, Ymax), y = 0 on a row
        ny_ = 2 * m + 1;
        y0_ = -m * h_;
    } else {
        const int my = static_cast<int>(std::floor(Ymax / h_ + 0.5 - 1e-9));
        if (mx < 1 || my < 1)
            fail(Status::invalid_argument, "grid: spacing too coarse for the domain");
        nx_ = 2 * mx + 1;
        x0_ = -mx * h_;
        if (slice == YSlice::full) {
            ny_ = 2 * my;
            y0_ = -(my - 0.5) * h_;
        } else {
            ny_ = my;
            y0_ = 0.5 * h_;
        }
    }

    index_.assign(static_cast<size_t>(nx_) * ny_, -1);
    const double edge_guard = 1e-9 * h_; // nodes this close to the boundary are exterior
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            if (!contains(profile_, x(i), y(j))) continue;
            if (eval_Y(profile_, x(i)) - std::abs(y(j)) <= edge_guard) continue;
            if (profile_.x_extent - std::abs(x(i)) <= edge_guard) continue;
            index_[node(i, j)] = n_interior_;
            dof_node_.push_back(node(i, j));
            ++n_interior_;
        }
    if (n_interior_ == 0) fail(Status::invalid_argument, "grid: empty interior");

    for (auto& t : theta_) t.assign(n_interior_, 1.0);
    mass_.resize(n_interior_);
    rho_.resize(n_interior_);

    for (int d = 0; d < n_interior_; ++d) {
        const int i = dof_i(d), j = dof_j(d);
        const double xi = x(i), yj = y(j);
        // +x
        if (i + 1 >= nx_ || !interior(i + 1, j))
            theta_[0][d] = cut_distance_x(profile_, xi, yj, +1.0, h_);
        // -x
        if (i - 1 < 0 || !interior(i - 1, j))
            theta_[1][d] = cut_distance_x(profile_, xi, yj, -1.0, h_);
        // +y: the only crossing moving up from an interior node is y = +Y(x)
        if (j + 1 >= ny_ || !interior(i, j + 1))
            theta_[2][d] = std::max(kThetaFloor, (eval_Y(profile_, xi) - yj) / h_);
        // -y
        if (j == 0 && slice_ != YSlice::full) {
            // symmetry axis; stiffness handled by the assembler, cell reaches y=0
        } else if (j - 1 < 0 || !interior(i, j - 1)) {
            theta_[3][d] = std::max(kThetaFloor, (eval_Y(profile_, xi) + yj) / h_);
        }

        const double rho = 0.5 * (theta_[0][d] + theta_[1][d]) * 0.5 *
                           (theta_[2][d] + theta_[3][d]);
        rho_[d] = rho;
        mass_[d] = (slice_ == YSlice::full ? 1.0 : 2.0) * h_ * h_ * rho;
    }
}

double Field::norm_l2() const {
    double s = 0.0;
    const auto& m = grid->mass();
    for (int d = 0; d < grid->n_interior(); ++d) {
        const double v = values[grid->node(grid->dof_i(d), grid->dof_j(d))];
        s += m[d] * v * v;
    }
    return std::sqrt(s);
}

Eigen::VectorXd Field::to_dof() const {
    Eigen::VectorXd u(grid->n_interior());
    for (int d = 0; d < grid->n_interior(); ++d)
        u[d] = values[grid->node(grid->dof_i(d), grid->dof_j(d))];
    return u;
}

Field Field::from_dof(const GridPtr& g, const Eigen::VectorXd& u) {
    Field f;
    f.grid = g;
    f.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g->nx()) * g->ny());
    for (int d = 0; d < g->n_interior(); ++d)
        f.values[g->node(g->dof_i(d), g->dof_j(d))] = u[d];
    return f;
}

} // namespace billab
