#include "billab/eigensolver2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

namespace billab {

namespace {

uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Eigen::VectorXd random_start(int n, uint64_t seed) {
    Eigen::VectorXd v(n);
    uint64_t s = seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL;
    for (int i = 0; i < n; ++i)
        v[i] = 2.0 * (splitmix64(s) >> 11) * 0x1.0p-53 - 1.0;
    return v;
}

double bdot(const Eigen::VectorXd& rho, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.cwiseProduct(rho).dot(b);
}
double bnorm(const Eigen::VectorXd& rho, const Eigen::VectorXd& a) {
    return std::sqrt(std::max(0.0, bdot(rho, a, a)));
}

struct ShiftContext {
    double sigma = 0.0;
    int below = 0;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

using ShiftPtr = std::shared_ptr<ShiftContext>;

ShiftPtr make_shift(const Operator2D& op, double sigma, bool verbose) {
    const double scale = std::max(1.0, std::abs(sigma));
    for (int attempt = 0; attempt < 5; ++attempt) {
        auto ctx = std::make_shared<ShiftContext>();
        ctx->sigma = sigma + attempt * 3e-11 * scale;
        Eigen::SparseMatrix<double> A = op.S;
        for (int i = 0; i < op.dim(); ++i) A.coeffRef(i, i) -= ctx->sigma * op.rho[i];
        ctx->ldlt.compute(A);
        if (ctx->ldlt.info() == Eigen::Success) {
            bool clean = true;
            int below = 0;
            const auto& d = ctx->ldlt.vectorD();
            for (int i = 0; i < d.size(); ++i) {
                if (!(std::abs(d[i]) > 0.0) || !std::isfinite(d[i])) { clean = false; break; }
                if (d[i] < 0.0) ++below;
            }
            if (clean) {
                ctx->below = below;
                if (verbose)
                    std::fprintf(stderr, "[eigs] shift sigma=%.6g below=%d\n", ctx->sigma, below);
                return ctx;
            }
        }
        if (verbose)
            std::fprintf(stderr, "[eigs] factorization at sigma=%.6g unstable, nudging\n",
                         ctx->sigma);
    }
    fail(Status::solver_error, "eigensolver: LDLT factorization failed near sigma");
}

struct Candidate {
    double lambda_sq = 0.0;
    double residual = 0.0;
    Eigen::VectorXd vec; // B-normalized
};

// Inverse-iteration polish toward the tolerance; returns achieved residual.
double refine(const Operator2D& op, const ShiftContext& ctx, Eigen::VectorXd& x,
              double& lambda_sq, double tol_abs) {
    double res = residual_check(op, x, lambda_sq);
    for (int it = 0; it < 6 && res > tol_abs; ++it) {
        Eigen::VectorXd y = ctx.ldlt.solve(op.rho.cwiseProduct(x));
        const double nb = bnorm(op.rho, y);
        if (!(nb > 0.0) || !std::isfinite(nb)) break;
        x = y / nb;
        lambda_sq = x.dot(op.S * x) / bdot(op.rho, x, x);
        res = residual_check(op, x, lambda_sq);
    }
    return res;
}

// Shift-invert Lanczos in the B = diag(rho) inner product with full
// reorthogonalization; collects residual-verified eigenpairs with lambda_sq in
// [lo, hi), deflating against `accepted`.
void lanczos_sweep(const Operator2D& op, const ShiftContext& ctx, double lo, double hi,
                   int want, std::vector<Candidate>& accepted, const SolveOptions& opts,
                   uint64_t seed) {
    const int n = op.dim();
    const int dim = std::min<int>(std::min(n, opts.max_lanczos), 3 * want + 40);
    std::vector<Eigen::VectorXd> V;
    V.reserve(dim + 1);
    std::vector<double> alpha, beta; // beta[j] couples v_j and v_{j+1}

    auto deflate = [&](Eigen::VectorXd& w) {
        for (const auto& c : accepted) w -= bdot(op.rho, w, c.vec) * c.vec;
    };

    Eigen::VectorXd v = random_start(n, seed);
    deflate(v);
    const double nb0 = bnorm(op.rho, v);
    if (!(nb0 > 0.0)) return;
    V.push_back(v / nb0);

    for (int j = 0; j < dim; ++j) {
        Eigen::VectorXd w = ctx.ldlt.solve(op.rho.cwiseProduct(V[j]));
        if (j > 0) w -= beta[j - 1] * V[j - 1];
        const double a = bdot(op.rho, w, V[j]);
        w -= a * V[j];
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : V) w -= bdot(op.rho, w, u) * u;
            deflate(w);
        }
        alpha.push_back(a);
        double b = bnorm(op.rho, w);
        if (!(b > 1e-300) || !std::isfinite(b)) {
            // invariant subspace exhausted; restart in a fresh direction
            Eigen::VectorXd f = random_start(n, seed + 77 + j);
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& u : V) f -= bdot(op.rho, f, u) * u;
                deflate(f);
            }
            b = bnorm(op.rho, f);
            if (!(b > 1e-300)) break;
            w = f;
        }
        beta.push_back(b);
        V.push_back(w / b);
    }

    const int m = static_cast<int>(alpha.size());
    if (m == 0) return;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        T(j, j) = alpha[j];
        if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);

    const double span = std::max(hi - lo, 1e-12);
    for (int k = 0; k < m; ++k) {
        const double theta = es.eigenvalues()[k];
        if (std::abs(theta) * span < 1e-13) continue; // maps far outside the slice
        double lsq = ctx.sigma + 1.0 / theta;
        if (lsq < lo || lsq >= hi) continue;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < m; ++j) x += es.eigenvectors()(j, k) * V[j];
        const double nb = bnorm(op.rho, x);
        if (!(nb > 0.0)) continue;
        x /= nb;
        const double tol_abs = opts.tol_eig * std::max(std::abs(lsq), 1e-2);
        const double res = refine(op, ctx, x, lsq, std::min(tol_abs, 1e-10 * std::max(lsq, 1.0)));
        if (res > tol_abs || lsq < lo || lsq >= hi) continue;
        // merge rule: close in lambda^2 and nearly parallel
        bool dup = false;
        for (const auto& c : accepted) {
            if (std::abs(c.lambda_sq - lsq) <= 1e-10 * std::max(1.0, std::abs(lsq))) {
                const double overlap = std::abs(bdot(op.rho, c.vec, x));
                if (std::sqrt(std::max(0.0, 1.0 - overlap * overlap)) <= 1e-6) { dup = true; break; }
            }
        }
        if (!dup) {
            // keep the accepted set B-orthonormal
            Eigen::VectorXd y = x;
            for (const auto& c : accepted) y -= bdot(op.rho, y, c.vec) * c.vec;
            const double ny = bnorm(op.rho, y);
            if (ny > 0.5) { // genuinely new direction
                y /= ny;
                accepted.push_back({lsq, residual_check(op, y, lsq), y});
            }
        }
        if (static_cast<int>(accepted.size()) >= want) break;
    }
}

struct SliceSolver {
    const Operator2D& op;
    const SolveOptions& opts;
    std::vector<ShiftPtr> cache;
    uint64_t seed_counter = 0;

    ShiftPtr shift_at(double sigma) {
        for (const auto& c : cache)
            if (std::abs(c->sigma - sigma) <= 1e-12 * std::max(1.0, std::abs(sigma))) return c;
        auto c = make_shift(op, sigma, opts.verbose);
        cache.push_back(c);
        return c;
    }

    void solve(double s1, int n1, double s2, int n2, std::vector<Candidate>& out, int depth) {
        const int count = n2 - n1;
        if (count <= 0) return;
        if (depth > 40)
            fail(Status::solver_error, "eigensolver: slice recursion failed to converge");
        if (count > opts.slice_max) {
            const double sm = 0.5 * (s1 + s2);
            auto ctx = shift_at(sm);
            solve(s1, n1, sm, ctx->below, out, depth + 1);
            solve(sm, ctx->below, s2, n2, out, depth + 1);
            return;
        }

        std::vector<Candidate> found;
        const double shifts[4] = {s1, 0.5 * (s1 + s2), s1 + 0.25 * (s2 - s1),
                                  s1 + 0.75 * (s2 - s1)};
        for (int attempt = 0; attempt < 4; ++attempt) {
            auto ctx = shift_at(shifts[attempt]);
            lanczos_sweep(op, *ctx, s1, s2, count, found, opts, opts.seed + 1000 * ++seed_counter);
            if (static_cast<int>(found.size()) >= count) break;
        }
        if (static_cast<int>(found.size()) == count) {
            for (auto& c : found) out.push_back(std::move(c));
            return;
        }
        if (opts.verbose)
            std::fprintf(stderr, "[eigs] slice [%.6g,%.6g): %zu of %d found, bisecting\n", s1, s2,
                         found.size(), count);
        const double sm = 0.5 * (s1 + s2);
        if (sm <= s1 || sm >= s2)
            fail(Status::solver_error, "eigensolver: cannot resolve cluster at machine precision");
        auto ctx = shift_at(sm);
        solve(s1, n1, sm, ctx->below, out, depth + 1);
        solve(sm, ctx->below, s2, n2, out, depth + 1);
    }
};

int mirror_j(const Grid& g, int j) { return g.ny() - 1 - j; }

// <u, P_y u> for full-domain fields; +1 even, -1 odd.
double parity_overlap(const Field& a, const Field& b) {
    const Grid& g = *a.grid;
    double s = 0.0;
    for (int d = 0; d < g.n_interior(); ++d) {
        const int i = g.dof_i(d), j = g.dof_j(d);
        s += g.mass()[d] * a.values[g.node(i, j)] * b.values[g.node(i, mirror_j(g, j))];
    }
    return s;
}

} // namespace

Operator2D assemble(const DomainProfile& profile, double h, YSlice slice) {
    return assemble_on(std::make_shared<Grid>(profile, h, slice));
}

Operator2D assemble_on(const GridPtr& grid) {
    Operator2D op;
    op.grid = grid;
    const Grid& g = *op.grid;
    const double h = g.h();

    // Both wings must be resolved.
    if (g.profile().wing_span() > 0.0) {
        int wing_cols = 0;
        for (int i = 0; i < g.nx(); ++i)
            if (std::abs(g.x(i)) > g.profile().a) ++wing_cols;
        if (wing_cols < 32)
            fail(Status::resolution_error, "assemble: fewer than 16 cells across each wing");
    }

    const int n = g.n_interior();
    const double e = 1.0 / (h * h);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(n) * 5);
    const auto& th = g.theta();

    for (int d = 0; d < n; ++d) {
        const int i = g.dof_i(d), j = g.dof_j(d);
        double diag = 0.0;
        // +x
        if (i + 1 < g.nx() && g.interior(i + 1, j)) {
            const int q = g.dof(i + 1, j);
            diag += e;
            trip.emplace_back(d, q, -e);
            trip.emplace_back(q, d, -e);
        } else {
            diag += e / th[0][d];
        }
        // -x (edge entries were added from the neighbor's +x pass)
        if (i - 1 >= 0 && g.interior(i - 1, j)) diag += e;
        else diag += e / th[1][d];
        // +y
        if (j + 1 < g.ny() && g.interior(i, j + 1)) {
            const int q = g.dof(i, j + 1);
            diag += e;
            trip.emplace_back(d, q, -e);
            trip.emplace_back(q, d, -e);
        } else {
            diag += e / th[2][d];
        }
        // -y
        if (g.axis_row(d)) {
            if (g.slice() == YSlice::odd) diag += 2.0 * e; // Dirichlet mirror across y = 0
            // even: mirror edge carries no energy
        } else if (j - 1 >= 0 && g.interior(i, j - 1)) {
            diag += e;
        } else {
            diag += e / th[3][d];
        }
        trip.emplace_back(d, d, diag);
    }

    op.S.resize(n, n);
    op.S.setFromTriplets(trip.begin(), trip.end());
    op.S.makeCompressed();
    op.rho = op.grid->rho();
    return op;
}

int count_below(const Operator2D& op, double sigma) {
    if (sigma <= 0.0) return 0; // S is positive definite
    return make_shift(op, sigma, false)->below;
}

double residual_check(const Operator2D& op, const Eigen::VectorXd& u, double lambda_sq) {
    const Eigen::VectorXd r = op.S * u - lambda_sq * op.rho.cwiseProduct(u);
    double num = 0.0;
    for (int i = 0; i < op.dim(); ++i) num += r[i] * r[i] / op.rho[i];
    const double den = bdot(op.rho, u, u);
    return std::sqrt(num / den);
}

std::vector<EigenPair> solve_window(const Operator2D& op, double lambda_min, double lambda_max,
                                    int max_modes, const SolveOptions& opts, bool* truncated) {
    if (!(lambda_min >= 0.0) || !(lambda_max >= lambda_min))
        fail(Status::invalid_argument, "solve_window: need 0 <= lambda_min <= lambda_max");
    if (truncated) *truncated = false;

    SliceSolver solver{op, opts, {}, 0};
    const double s_lo = lambda_min * lambda_min;
    const double s_hi = lambda_max * lambda_max * (1.0 + 1e-12) + 1e-12;
    int n_lo = 0;
    if (s_lo > 0.0) n_lo = solver.shift_at(s_lo)->below;
    const int n_hi = solver.shift_at(s_hi)->below;

    std::vector<Candidate> cands;
    solver.solve(s_lo, n_lo, s_hi, n_hi, cands, 0);
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.lambda_sq < b.lambda_sq; });
    if (max_modes > 0 && static_cast<int>(cands.size()) > max_modes) {
        cands.resize(max_modes);
        if (truncated) *truncated = true;
    }

    // Re-orthonormalize inside near-degenerate clusters (modified Gram-Schmidt).
    for (size_t k = 0; k < cands.size(); ++k) {
        for (size_t l = k; l-- > 0;) {
            if (cands[k].lambda_sq - cands[l].lambda_sq >
                1e-6 * std::max(1.0, cands[k].lambda_sq))
                break;
            cands[k].vec -= bdot(op.rho, cands[k].vec, cands[l].vec) * cands[l].vec;
        }
        const double nb = bnorm(op.rho, cands[k].vec);
        cands[k].vec /= nb;
        cands[k].residual = residual_check(op, cands[k].vec, cands[k].lambda_sq);
    }

    std::vector<EigenPair> out;
    out.reserve(cands.size());
    for (auto& c : cands) {
        EigenPair p;
        p.lambda_sq = c.lambda_sq;
        p.lambda = std::sqrt(std::max(0.0, c.lambda_sq));
        p.residual = c.residual;
        p.field = Field::from_dof(op.grid, c.vec);
        const double nrm = p.field.norm_l2();
        p.field.values /= nrm;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<EigenPair> solve_lowest(const Operator2D& op, int k, const SolveOptions& opts) {
    if (k <= 0) fail(Status::invalid_argument, "solve_lowest: k must be positive");
    const double area = domain_area(op.grid->profile());
    double s_hi = 4.0 * std::numbers::pi * (k + 4) / std::max(area, 1e-12) * 1.5 + 1.0;
    for (int it = 0; it < 60; ++it) {
        if (count_below(op, s_hi) >= k + 1) break;
        s_hi *= 1.8;
    }
    auto pairs = solve_window(op, 0.0, std::sqrt(s_hi), 0, opts);
    if (static_cast<int>(pairs.size()) > k) pairs.resize(k);
    if (static_cast<int>(pairs.size()) < k)
        fail(Status::solver_error, "solve_lowest: fewer eigenvalues found than requested");
    return pairs;
}

Field reflect_to_full(const Field& half, int parity, const GridPtr& full_grid) {
    const Grid& hg = *half.grid;
    const Grid& fg = *full_grid;
    if (hg.slice() == YSlice::full)
        fail(Status::invalid_argument, "reflect_to_full: field is already full-domain");
    Field out;
    out.grid = full_grid;
    out.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fg.nx()) * fg.ny());
    const int m = fg.ny() / 2;
    for (int j = 0; j < hg.ny(); ++j)
        for (int i = 0; i < hg.nx(); ++i) {
            const double v = half.values[hg.node(i, j)];
            if (v == 0.0) continue;
            out.values[fg.node(i, m + j)] = v;
            out.values[fg.node(i, m - 1 - j)] = parity * v;
        }
    const double nrm = out.norm_l2();
    if (nrm > 0.0) out.values /= nrm;
    return out;
}

std::vector<EigenPair> solve_spectrum(const DomainProfile& profile, double h, double lambda_min,
                                      double lambda_max, int max_modes, bool split_parity,
                                      const SolveOptions& opts, bool* truncated) {
    if (!split_parity) {
        Operator2D op = assemble(profile, h, YSlice::full);
        auto pairs = solve_window(op, lambda_min, lambda_max, max_modes, opts, truncated);
        // Label parity; rotate near-degenerate clusters onto parity eigenvectors.
        size_t k = 0;
        while (k < pairs.size()) {
            size_t e = k + 1;
            while (e < pairs.size() && pairs[e].lambda_sq - pairs[k].lambda_sq <=
                                           1e-8 * std::max(1.0, pairs[k].lambda_sq))
                ++e;
            const size_t cl = e - k;
            if (cl > 1 && cl <= 6) {
                Eigen::MatrixXd W(cl, cl);
                for (size_t r = 0; r < cl; ++r)
                    for (size_t c = 0; c < cl; ++c)
                        W(r, c) = parity_overlap(pairs[k + r].field, pairs[k + c].field);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (W + W.transpose()));
                std::vector<Eigen::VectorXd> rotated(cl);
                for (size_t c = 0; c < cl; ++c) {
                    rotated[c] = Eigen::VectorXd::Zero(pairs[k].field.values.size());
                    for (size_t r = 0; r < cl; ++r)
                        rotated[c] += es.eigenvectors()(r, c) * pairs[k + r].field.values;
                }
                for (size_t c = 0; c < cl; ++c) {
                    pairs[k + c].field.values = rotated[c];
                    const double nrm = pairs[k + c].field.norm_l2();
                    if (nrm > 0.0) pairs[k + c].field.values /= nrm;
                }
            }
            for (size_t c = k; c < e; ++c) {
                const double p = parity_overlap(pairs[c].field, pairs[c].field);
                pairs[c].parity_y = p > 0.99 ? 1 : (p < -0.99 ? -1 : 0);
            }
            k = e;
        }
        return pairs;
    }

    auto full_grid = std::make_shared<Grid>(profile, h, YSlice::full);
    auto run_half = [&](YSlice s) {
        Operator2D op = assemble(profile, h, s);
        bool trunc = false;
        auto pairs = solve_window(op, lambda_min, lambda_max, 0, opts, &trunc);
        return pairs;
    };
    auto even = run_half(YSlice::even);
    auto odd = run_half(YSlice::odd);

    std::vector<EigenPair> out;
    out.reserve(even.size() + odd.size());
    for (auto* src : {&even, &odd}) {
        const int parity = (src == &even) ? 1 : -1;
        for (auto& p : *src) {
            EigenPair q;
            q.lambda_sq = p.lambda_sq;
            q.lambda = p.lambda;
            q.residual = p.residual;
            q.parity_y = parity;
            q.field = reflect_to_full(p.field, parity, full_grid);
            out.push_back(std::move(q));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const EigenPair& a, const EigenPair& b) { return a.lambda_sq < b.lambda_sq; });
    if (truncated) *truncated = false;
    if (max_modes > 0 && static_cast<int>(out.size()) > max_modes) {
        out.resize(max_modes);
        if (truncated) *truncated = true;
    }
    return out;
}

} // namespace billab
