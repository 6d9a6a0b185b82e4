#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "billab/geometry.hpp"

namespace billab {

// Which y-slice of the symmetric domain the grid represents.  even/odd grids hold
// only y > 0 and encode the parity condition across y = 0; quadrature weights
// then count both halves.
enum class YSlice { full, even, odd };

// y-lattice placement: staggered rows put y = 0 between rows (the default);
// aligned rows snap h so the flat boundaries y = +-half_width sit exactly one
// cell beyond the last interior row, which makes transverse sine factors exact
// discrete eigenvectors on the rectangular part.  aligned implies a full slice.
enum class YAlign { staggered, aligned };

// Uniform Cartesian lattice clipped to the domain interior.  Node (i,j) sits at
// (x0 + i h, y0 + j h); no node lies on the boundary.  Cut distances theta in
// (0,1] give the fractional distance from an interior node to the boundary along
// a lattice direction whose neighbor is exterior.
class Grid {
public:
    Grid(const DomainProfile& profile, double h, YSlice slice = YSlice::full,
         YAlign align = YAlign::staggered);

    const DomainProfile& profile() const { return profile_; }
    double h() const { return h_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    YSlice slice() const { return slice_; }
    double x(int i) const { return x0_ + i * h_; }
    double y(int j) const { return y0_ + j * h_; }
    double origin_x() const { return x0_; }
    double origin_y() const { return y0_; }

    int n_interior() const { return n_interior_; }
    bool interior(int i, int j) const { return index_[node(i, j)] >= 0; }
    int dof(int i, int j) const { return index_[node(i, j)]; }
    int node(int i, int j) const { return j * nx_ + i; }
    int dof_i(int dof) const { return dof_node_[dof] % nx_; }
    int dof_j(int dof) const { return dof_node_[dof] / nx_; }

    // Per-dof cut distances: [0]=+x, [1]=-x, [2]=+y, [3]=-y; 1.0 when the
    // neighbor is interior.  For even/odd grids the bottom row's -y entry refers
    // to the symmetry axis and is handled by the assembler.
    const std::array<std::vector<double>, 4>& theta() const { return theta_; }
    bool axis_row(int dof) const { return slice_ != YSlice::full && dof_j(dof) == 0; }

    // L2 quadrature weight per dof (h^2 * cell volume fraction; doubled on
    // half-domain slices so norms are norms over the whole domain).
    const Eigen::VectorXd& mass() const { return mass_; }
    // Cell volume fraction rho per dof (solver-side mass, never doubled).
    const Eigen::VectorXd& rho() const { return rho_; }

private:
    DomainProfile profile_;
    double h_;
    YSlice slice_;
    int nx_ = 0, ny_ = 0;
    double x0_ = 0.0, y0_ = 0.0;
    int n_interior_ = 0;
    std::vector<int32_t> index_;    // node -> dof or -1
    std::vector<int32_t> dof_node_; // dof -> node
    std::array<std::vector<double>, 4> theta_;
    Eigen::VectorXd mass_, rho_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Scalar field sampled on every lattice node (exterior nodes zero).
struct Field {
    GridPtr grid;
    Eigen::VectorXd values; // size nx*ny, node-ordered

    double norm_l2() const;                   // quadrature L2 over the whole domain
    Eigen::VectorXd to_dof() const;           // restrict to interior dofs
    static Field from_dof(const GridPtr& g, const Eigen::VectorXd& u);
};

} // namespace billab
