#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "billab/grid.hpp"

namespace billab {

// Symmetric positive definite cut-cell discretization of the Dirichlet Laplacian
// as a generalized pencil: S u = lambda^2 diag(rho) u, where S carries the edge
// energies (cut edges contribute 1/(theta h^2) to the diagonal) and rho is the
// lumped cell-volume fraction.  L = diag(rho)^-1 S is the difference operator.
struct Operator2D {
    GridPtr grid;
    Eigen::SparseMatrix<double> S;
    Eigen::VectorXd rho;

    int dim() const { return static_cast<int>(rho.size()); }
};

Operator2D assemble(const DomainProfile& profile, double h, YSlice slice = YSlice::full);
Operator2D assemble_on(const GridPtr& grid);

struct EigenPair {
    double lambda_sq = 0.0;
    double lambda = 0.0;
    double residual = 0.0;
    int parity_y = 0; // +1 even, -1 odd, 0 unknown
    Field field;      // normalized to ||u||_L2(Omega) = 1
};

struct SolveOptions {
    double tol_eig = 1e-8;   // residual <= tol_eig * lambda_sq
    uint64_t seed = 0;
    int max_lanczos = 400;   // per-shift Krylov dimension cap
    int slice_max = 48;      // max eigenvalues handled per spectral slice
    bool verbose = false;
};

// Number of pencil eigenvalues strictly below sigma (LDLT inertia).
int count_below(const Operator2D& op, double sigma);

// All eigenpairs with lambda in [lambda_min, lambda_max], ascending, orthonormal
// in the L2 inner product.  Completeness is certified against LDLT inertia
// counts; pairs are deduplicated by (lambda^2, vector angle).  When more than
// max_modes eigenvalues live in the window, the lowest max_modes are returned
// and `truncated` (if given) is set.
std::vector<EigenPair> solve_window(const Operator2D& op, double lambda_min, double lambda_max,
                                    int max_modes, const SolveOptions& opts = {},
                                    bool* truncated = nullptr);

// Lowest k eigenpairs.
std::vector<EigenPair> solve_lowest(const Operator2D& op, int k, const SolveOptions& opts = {});

// ||(L - lambda^2) u||_L2 / ||u||_L2 for a dof vector; the discrete E(lambda).
double residual_check(const Operator2D& op, const Eigen::VectorXd& u, double lambda_sq);

// Window solve over the full domain, splitting into even/odd y-parity halves
// when split_parity is set (domain is y-symmetric by construction).  Returned
// fields live on the full-domain grid in either case.
std::vector<EigenPair> solve_spectrum(const DomainProfile& profile, double h, double lambda_min,
                                      double lambda_max, int max_modes, bool split_parity,
                                      const SolveOptions& opts = {}, bool* truncated = nullptr);

// Expand a half-domain parity field onto its full-domain grid.
Field reflect_to_full(const Field& half, int parity, const GridPtr& full_grid);

} // namespace billab
