// Acceptance suite: one pass/fail line per criterion.  Run with a criterion
// name to execute just that criterion, or with no arguments for all of them.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "billab/config.hpp"
#include "billab/cutoff.hpp"
#include "billab/eigensolver2d.hpp"
#include "billab/io.hpp"
#include "billab/massfunc.hpp"
#include "billab/quasimode.hpp"
#include "billab/runner.hpp"
#include "billab/scaling.hpp"
#include "billab/separable1d.hpp"
#include "billab/straighten.hpp"

using namespace billab;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    bool info_only = false; // reported with the run, does not gate the suite
    std::string detail;
};

uint64_t rng_state = 12345;
double urand() {
    rng_state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = rng_state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return ((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------------------
// operator identities: det g = Y^2 (rel 1e-13), d_x coefficient residual
// <= 1e-12, d_y simplified vs unsimplified <= 1e-10, 1000 random samples over
// stadium, power-law (k+alpha in {2, 2.5, 3, 4}) and gevrey wings, under 1 s.
Outcome run_operator_identities() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<DomainProfile> profiles = {
        make_stadium(1.0, pi),
        make_power(1.0, pi, 2, 0.0, -1.0, 1.0),
        make_power(1.0, pi, 2, 0.5, 1.0, 1.0),
        make_power(1.0, pi, 3, 0.0, -0.5, 1.0),
        make_power(1.0, pi, 4, 0.0, 0.25, 1.0),
        make_gevrey(1.0, pi, 1.0, -1.0, 1.0)};
    double wdet = 0.0, wdx = 0.0, wdy = 0.0;
    for (int s = 0; s < 1000; ++s) {
        const DomainProfile& p = profiles[s % profiles.size()];
        const double safe = p.right_wing.kind == WingKind::stadium ? 0.85 : 1.0 - 1e-9;
        const double x = (2.0 * urand() - 1.0) * (p.a + safe * p.wing_span());
        const double yp = 2.0 * urand() - 1.0;
        const StraightenedCoeffs c = coeffs_at(p, x, yp);
        const double Y = eval_Y(p, x);
        wdet = std::max(wdet, std::abs(Y * Y * (1.0 + c.A) - c.B * c.B - c.det_g) / c.det_g);
        wdx = std::max(wdx, std::abs(dx_coefficient_residual(p, x, yp)));
        wdy = std::max(wdy, std::abs(dy_coefficient(p, x, yp) -
                                     dy_coefficient_unsimplified(p, x, yp)));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome o;
    o.pass = wdet <= 1e-13 && wdx <= 1e-12 && wdy <= 1e-10 && secs < 1.0;
    o.detail = fmt("det=%.2e (<=1e-13) dx=%.2e (<=1e-12) dy=%.2e (<=1e-10) runtime=%.2fs (<1s)",
                   wdet, wdx, wdy, secs);
    return o;
}

// ---------------------------------------------------------------------------
// solver validation: rectangle lowest 20 vs exact separable spectrum (rel 1e-3,
// h = 0.01) and the disc of radius pi lowest 5 vs a Bessel-zero oracle.
double bessel_zero(int nu, int k) {
    int found = 0;
    double last = std::cyl_bessel_j(nu, 0.5);
    for (double x = 0.5 + 1e-3; x < 80.0; x += 1e-3) {
        const double f = std::cyl_bessel_j(nu, x);
        if (last * f < 0.0 && ++found == k) {
            double lo = x - 1e-3, hi = x;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                (std::cyl_bessel_j(nu, lo) * std::cyl_bessel_j(nu, mid) <= 0.0 ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        }
        last = f;
    }
    return -1.0;
}

Outcome run_solver_validation() {
    Outcome o;
    // rectangle [-1,1] x [-pi,pi]
    std::vector<double> exact;
    for (int m = 1; m <= 12; ++m)
        for (int n = 1; n <= 12; ++n)
            exact.push_back(std::pow(m * pi / 2.0, 2) + 0.25 * n * n);
    std::sort(exact.begin(), exact.end());
    auto rect_pairs = solve_spectrum(make_flat(1.0, pi, 1.0), 0.01, 0.0, 5.2, 0, true, {});
    if (rect_pairs.size() < 20) {
        o.detail = "rectangle: fewer than 20 modes found";
        return o;
    }
    double worst_rect = 0.0;
    for (int i = 0; i < 20; ++i)
        worst_rect = std::max(worst_rect,
                              std::abs(rect_pairs[i].lambda_sq - exact[i]) / exact[i]);

    // disc of radius pi as the degenerate stadium a = 0
    const double j01 = bessel_zero(0, 1), j11 = bessel_zero(1, 1), j21 = bessel_zero(2, 1);
    const double disc_exact[5] = {j01 * j01 / (pi * pi), j11 * j11 / (pi * pi),
                                  j11 * j11 / (pi * pi), j21 * j21 / (pi * pi),
                                  j21 * j21 / (pi * pi)};
    auto disc_pairs = solve_spectrum(make_stadium(0.0, pi), 0.01, 0.0, 1.8, 0, true, {});
    if (disc_pairs.size() < 5) {
        o.detail = "disc: fewer than 5 modes found";
        return o;
    }
    double worst_disc = 0.0;
    for (int i = 0; i < 5; ++i)
        worst_disc = std::max(worst_disc,
                              std::abs(disc_pairs[i].lambda_sq - disc_exact[i]) / disc_exact[i]);

    o.pass = worst_rect <= 1e-3 && worst_disc <= 1e-3;
    o.detail = fmt("rectangle20 rel=%.2e (<=1e-3 at h=0.01), disc5 vs Bessel rel=%.2e (<=1e-3)",
                   worst_rect, worst_disc);
    return o;
}

// ---------------------------------------------------------------------------
// conjugation round trip O(h^2) and transforms vs a centered-difference oracle,
// 3-level refinement with observed order in [1.7, 2.3].
Outcome run_conjugation_transform() {
    const DomainProfile stad = make_stadium(1.0, pi);
    auto window = [](double s) {
        const double q = 1.0 - s * s;
        return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
    };
    auto fu = [&](double x, double y) {
        return window(x / 1.5) * window(y / 2.9) * std::cos(2.0 * x + 0.3) * std::sin(1.0 + y);
    };
    double errs[3];
    const double hs[3] = {0.04, 0.02, 0.01};
    for (int lev = 0; lev < 3; ++lev) {
        auto grid = std::make_shared<Grid>(stad, hs[lev]);
        Field u;
        u.grid = grid;
        u.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid->nx()) * grid->ny());
        for (int d = 0; d < grid->n_interior(); ++d) {
            const int i = grid->dof_i(d), j = grid->dof_j(d);
            u.values[grid->node(i, j)] = fu(grid->x(i), grid->y(j));
        }
        auto sg = make_strip_grid(*grid, 0.7);
        const Field back = conjugate_to_u(conjugate_to_v(u, sg), grid);
        double err = 0.0;
        for (int d = 0; d < grid->n_interior(); ++d) {
            const int i = grid->dof_i(d), j = grid->dof_j(d);
            if (std::abs(grid->x(i)) > 1.6) continue;
            err = std::max(err,
                           std::abs(back.values[grid->node(i, j)] - u.values[grid->node(i, j)]));
        }
        errs[lev] = err;
    }
    const double rt_order = 0.5 * (std::log2(errs[0] / errs[1]) + std::log2(errs[1] / errs[2]));

    // transforms against the finite-difference oracle
    auto v = [](double x, double yp) { return std::cos(1.1 * x) * std::sin(0.9 * yp); };
    auto vx = [](double x, double yp) { return -1.1 * std::sin(1.1 * x) * std::sin(0.9 * yp); };
    auto vy = [](double x, double yp) { return 0.9 * std::cos(1.1 * x) * std::cos(0.9 * yp); };
    auto vxx = [&](double x, double yp) { return -1.21 * v(x, yp); };
    auto vyy = [&](double x, double yp) { return -0.81 * v(x, yp); };
    auto vxy = [](double x, double yp) {
        return -0.99 * std::sin(1.1 * x) * std::cos(0.9 * yp);
    };
    auto u_of = [&](double x, double y) {
        const double Y = eval_Y(stad, x);
        return v(x, y / Y) / std::sqrt(Y);
    };
    const double x0 = 1.45, y0 = 0.8;
    const double yp0 = y0 / eval_Y(stad, x0);
    const double ux = transform_dx(v(x0, yp0), vx(x0, yp0), vy(x0, yp0), stad, x0, yp0);
    const double uxx = transform_dxx(v(x0, yp0), vx(x0, yp0), vy(x0, yp0), vxx(x0, yp0),
                                     vxy(x0, yp0), vyy(x0, yp0), stad, x0, yp0);
    double e1[3], e2[3];
    const double fhs[3] = {4e-3, 2e-3, 1e-3};
    for (int lev = 0; lev < 3; ++lev) {
        const double h = fhs[lev];
        e1[lev] = std::abs((u_of(x0 + h, y0) - u_of(x0 - h, y0)) / (2 * h) - ux);
        e2[lev] = std::abs(
            (u_of(x0 + h, y0) - 2 * u_of(x0, y0) + u_of(x0 - h, y0)) / (h * h) - uxx);
    }
    const double o1 = 0.5 * (std::log2(e1[0] / e1[1]) + std::log2(e1[1] / e1[2]));
    const double o2 = 0.5 * (std::log2(e2[0] / e2[1]) + std::log2(e2[1] / e2[2]));

    Outcome o;
    o.pass = rt_order >= 1.7 && o1 >= 1.7 && o1 <= 2.3 && o2 >= 1.7 && o2 <= 2.3;
    o.detail = fmt("round-trip order=%.2f (>=1.7), dx-oracle order=%.2f, dxx-oracle order=%.2f "
                   "(both in [1.7,2.3])",
                   rt_order, o1, o2);
    return o;
}

// ---------------------------------------------------------------------------
// s_delta closed form: pinned values, smooth limit, branch-crossing continuity.
Outcome run_s_delta_formula() {
    const double v1 = compute_s_delta(1, 1.0, 0.1);
    const double v2 = compute_s_delta(2, 1.0, 0.1);
    const double e1 = std::abs(v1 - 2.2);
    const double e2 = std::abs(v2 - (1.0 + 1.1 / 3.0 + 0.1));
    const double vlim = compute_s_delta(4000, 0.0, 0.05);
    const double e3 = std::abs(vlim - 1.05); // -> 1 + delta as k + alpha -> inf
    const double kappa_star = 3.0 / (1.0 - 0.1);
    const double b1 = 1.0 / kappa_star;
    const double b2 = 1.1 / (2.0 * kappa_star - 3.0);
    const double e4 = std::abs(b1 - b2); // the two branches meet here
    const double e5 =
        std::abs(compute_s_delta(3, kappa_star - 3.0, 0.1) - (1.0 + b1 + 0.1));
    Outcome o;
    o.pass = e1 <= 1e-14 && e2 <= 1e-14 && e3 <= 1e-3 && e4 <= 1e-14 && e5 <= 1e-14;
    o.detail = fmt("s(1,1,.1)err=%.1e s(2,1,.1)err=%.1e limit err=%.1e crossing err=%.1e "
                   "(pinned to 1e-14)",
                   e1, e2, e3, e4);
    return o;
}

// ---------------------------------------------------------------------------
// Theorem trend: stadium eigenmode sweep lambda in [5, 40]; the lower-envelope
// slope of max(M0, M1, M2) must stay above -2.3 and the theorem check must
// raise zero alarms.
struct SweepRowOut {
    double lambda, E, M0, M1, M2;
    int parity;
};

std::vector<SweepRowOut> stadium_sweep(const std::vector<double>& centers, double half_window,
                                       bool verbose) {
    const DomainProfile stad = make_stadium(1.0, pi);
    std::vector<SweepRowOut> rows;
    for (double lc : centers) {
        const double s_lo = lc * lc - half_window, s_hi = lc * lc + half_window;
        const double h = 0.2 / std::sqrt(s_hi);
        SolveOptions opts;
        opts.seed = 2026;
        auto pairs =
            solve_spectrum(stad, h, std::sqrt(s_lo), std::sqrt(s_hi), 0, true, opts);
        for (const auto& p : pairs) {
            const WingMasses m = wing_masses(p.field, p.lambda, 1.0);
            rows.push_back({p.lambda, p.residual, m.M0, m.M1, m.M2, p.parity_y});
        }
        if (verbose)
            std::fprintf(stderr, "[sweep] bin %.1f: h=%.4g modes=%zu (total %zu)\n", lc, h,
                         pairs.size(), rows.size());
    }
    return rows;
}

Outcome run_theorem_trend() {
    const std::vector<double> centers = {5.7, 7.5, 10.0, 13.0, 16.5, 20.5,
                                         24.5, 28.5, 33.0, 38.0};
    auto rows = stadium_sweep(centers, 1.73, true);

    std::vector<TheoremEntry> entries;
    std::map<long, std::pair<double, double>> bins;
    for (const auto& r : rows) {
        entries.push_back({r.lambda, r.E, WingMasses{r.M0, r.M1, r.M2}, ""});
        const double mx = std::max({r.M0, r.M1, r.M2});
        const long b = static_cast<long>(std::floor(r.lambda));
        auto it = bins.find(b);
        if (it == bins.end() || mx < it->second.second) bins[b] = {r.lambda, mx};
    }
    std::vector<std::pair<double, double>> envelope(bins.size());
    std::transform(bins.begin(), bins.end(), envelope.begin(),
                   [](const auto& kv) { return kv.second; });
    const ScalingFit fit = fit_exponent(envelope);
    const TheoremVerdict verdict = theorem_check(entries, 0.1, 0.5);

    Outcome o;
    o.pass = fit.slope >= -2.3 && verdict.alarms == 0 && verdict.verdict == "PASS";
    o.detail = fmt("modes=%zu envelope slope=%.3f (>=-2.3, floor -(2+delta) at delta=0.1), "
                   "alarms=%d (=0), theorem_check=%s (T-slope=%.3f)",
                   rows.size(), fit.slope, verdict.alarms, verdict.verdict.c_str(),
                   verdict.envelope_slope);
    return o;
}

// ---------------------------------------------------------------------------
// Fixed-cutoff quasimode residual: E equals ||chi''||/||chi|| within a
// 2 h^2 (fourth-derivative scale) tolerance across n in {4,...,64}.
Outcome run_quasimode_residual() {
    const DomainProfile stad = make_stadium(1.0, pi);
    const Cutoff chi(0.4, 0.0, 0.45);
    const double R = chi.support_radius();
    const int N = 400000;
    double n0 = 0.0, n2 = 0.0, n4 = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double x = -R + 2 * R * i / N;
        const double w = (i == 0 || i == N) ? 0.5 : 1.0;
        const double c0 = chi.value(x), c2 = chi.deriv(x, 2), c4 = chi.deriv(x, 4);
        n0 += w * c0 * c0;
        n2 += w * c2 * c2;
        n4 += w * c4 * c4;
    }
    const double e_cont = std::sqrt(n2 / n0);
    const double q4 = std::sqrt(n4 / n0);

    Outcome o;
    o.pass = true;
    std::string per;
    for (int n : {4, 8, 16, 32, 64}) {
        const double lam = n / 2.0;
        double h = std::min(0.2 / lam, chi.flank_width() / 10.0);
        h = std::min(h, pi / 16.0);
        auto grid = std::make_shared<Grid>(stad, h, YSlice::full, YAlign::aligned);
        Operator2D op = assemble_on(grid);
        const Quasimode q = build_bouncing_ball(n, chi, op);
        const double hh = grid->h();
        const double gap = std::abs(q.residual - e_cont);
        const double tol =
            2.0 * hh * hh * (q4 + std::pow(lam, 4.0) + 2.0 * lam * lam * e_cont) / 12.0;
        if (gap > tol) o.pass = false;
        per += fmt(" n%d:%.1e/%.1e", n, gap, tol);
    }
    o.detail = fmt("E_cont=%.4f, gap vs 2h^2(||chi''''||+lam^4+2lam^2 E)/12 tolerance:%s",
                   e_cont, per.c_str());
    return o;
}

// ---------------------------------------------------------------------------
// Separable oracle scaling: closing power-law wings with k+alpha in {2, 3, 4};
// wing-norm slopes monotone in k+alpha and each above -s_delta - 0.3.
Outcome run_separable_scaling() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> ns = {8, 16, 32, 64, 128, 256};
    struct Case {
        int k;
        double alpha;
    };
    const Case cases[3] = {{2, 0.0}, {3, 0.0}, {4, 0.0}};
    double slopes[3];
    std::string per;
    Outcome o;
    o.pass = true;
    for (int c = 0; c < 3; ++c) {
        const double kappa = cases[c].k + cases[c].alpha;
        const double span = std::pow(pi / 2.0, 1.0 / kappa); // wall where Y = pi/2
        const DomainProfile prof = make_power(1.0, pi, cases[c].k, cases[c].alpha, -1.0, span);
        auto rows = sweep_scaling(prof, ns, 0.1, 0.0, 2, 1.0);
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : rows)
            pts.emplace_back(r.lambda, std::sqrt(r.wing_mass_left + r.wing_mass_right));
        const ScalingFit fit = fit_exponent(pts);
        slopes[c] = fit.slope;
        const double floor_c = -compute_s_delta(cases[c].k, cases[c].alpha, 0.1) - 0.3;
        if (fit.slope < floor_c) o.pass = false;
        per += fmt(" k+a=%.0f: slope=%.3f floor=%.3f;", kappa, fit.slope, floor_c);
    }
    if (!(slopes[0] < slopes[1] && slopes[1] < slopes[2])) o.pass = false;
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 60.0) o.pass = false;
    o.detail = fmt("%s monotone=%s runtime=%.1fs (<60s)", per.c_str(),
                   (slopes[0] < slopes[1] && slopes[1] < slopes[2]) ? "yes" : "no", secs);
    return o;
}

// ---------------------------------------------------------------------------
// Weighted-norm ratio sanity (INFO): over a stadium eigenmode sweep, the five
// ratios value/ceiling of the localized derivative norms are fitted against
// lambda; slope <= 0.1 means no systematic growth.  The ceilings assume wing
// masses far smaller than honest eigenfunctions carry, so growth here is
// reported with the run rather than failed.
Outcome run_lemma_ratio() {
    const DomainProfile stad = make_stadium(1.0, pi);
    const std::vector<double> centers = {6.0, 9.0, 13.0, 18.0, 24.0, 30.0, 37.0};
    std::map<std::string, std::vector<std::pair<double, double>>> ratios;
    for (double lc : centers) {
        const double s_lo = lc * lc - 1.0, s_hi = lc * lc + 1.0;
        const double h = 0.2 / std::sqrt(s_hi);
        SolveOptions opts;
        opts.seed = 9;
        auto pairs = solve_spectrum(stad, h, std::sqrt(s_lo), std::sqrt(s_hi), 0, true, opts);
        if (pairs.empty()) continue;
        auto grid = pairs.front().field.grid;
        auto sg = make_strip_grid(*grid, 1.0);
        for (const auto& p : pairs) {
            const StripField v = conjugate_to_v(p.field, sg);
            const CutoffSpec spec{1.0, p.lambda, 1.25, 1.0};
            const LemmaNorms ln = lemma_norms_c11(v, p.lambda, 0.5, 0.1, spec);
            for (const auto& [key, norm] : ln)
                if (norm.ratio > 0.0) ratios[key].emplace_back(p.lambda, norm.ratio);
        }
        std::fprintf(stderr, "[lemma] bin %.1f done (%zu modes)\n", lc, pairs.size());
    }
    Outcome o;
    o.info_only = true;
    o.pass = true;
    std::string per;
    for (const char* key : {"ny", "nx", "nxy", "nyy", "nxx"}) {
        if (ratios[key].size() < 5) {
            per += fmt(" %s:n/a", key);
            continue;
        }
        const ScalingFit fit = fit_exponent(ratios[key]);
        if (fit.slope > 0.1) o.pass = false;
        per += fmt(" %s:%.2f", key, fit.slope);
    }
    o.detail = fmt("ratio slopes (<=0.1 means no growth against the ceilings):%s", per.c_str());
    return o;
}

// ---------------------------------------------------------------------------
// Determinism: identical config + seed produce byte-identical CSV outputs.
Outcome run_determinism() {
    const char* cfg_text =
        "profile.kind = stadium\nprofile.a = 1\ngrid.h = 0.06\n"
        "solver.lambda_min = 3\nsolver.lambda_max = 4\nsolver.seed = 11\n"
        "separable.n_list = 8,16,32,64\nquasimode.n_list = 4,8\n"
        "quasimode.fixed_inner = 0.4\nquasimode.fixed_outer = 0.85\n";
    const fs::path base = fs::temp_directory_path() / "billab_acceptance_det";
    fs::remove_all(base);
    std::vector<std::string> csvs = {"modes.csv", "separable.csv", "separable_sensitivity.csv",
                                     "quasimode.csv", "mass_report.csv"};
    std::map<std::string, std::string> hashes;
    Outcome o;
    o.pass = true;
    for (int run = 0; run < 2; ++run) {
        const fs::path dir = base / ("run" + std::to_string(run));
        fs::create_directories(dir);
        RunContext ctx;
        ctx.cfg = parse_config_text(cfg_text, "det.cfg");
        ctx.out_dir = dir.string();
        ctx.threads = 2;
        if (run_subcommand("eigs", ctx) != 0 || run_subcommand("separable", ctx) != 0 ||
            run_subcommand("quasimode", ctx) != 0 || run_subcommand("mass-report", ctx) != 0) {
            o.pass = false;
            o.detail = "subcommand failed";
            return o;
        }
        for (const auto& name : csvs) {
            const std::string h = sha256_file(dir / name);
            if (run == 0)
                hashes[name] = h;
            else if (hashes[name] != h) {
                o.pass = false;
                o.detail = "mismatch in " + name;
            }
        }
    }
    if (o.pass) o.detail = fmt("%zu CSVs byte-identical across reruns", csvs.size());
    fs::remove_all(base);
    return o;
}

using CriterionFn = std::function<Outcome()>;
const std::vector<std::pair<std::string, CriterionFn>> kCriteria = {
    {"operator-identities", run_operator_identities},
    {"solver-validation", run_solver_validation},
    {"conjugation-transform", run_conjugation_transform},
    {"s-delta-formula", run_s_delta_formula},
    {"theorem-trend", run_theorem_trend},
    {"quasimode-residual", run_quasimode_residual},
    {"separable-scaling", run_separable_scaling},
    {"lemma-ratio", run_lemma_ratio},
    {"determinism", run_determinism},
};

} // namespace

int main(int argc, char** argv) {
    int failures = 0;
    bool matched = false;
    for (const auto& [name, fn] : kCriteria) {
        if (argc > 1 && name != argv[1]) continue;
        matched = true;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const char* status = o.pass ? (o.info_only ? "PASS (INFO)" : "PASS")
                                    : (o.info_only ? "INFO-FLAG" : "FAIL");
        std::printf("ACCEPT %-22s %-11s %s\n", name.c_str(), status, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass && !o.info_only) ++failures;
    }
    if (!matched && argc > 1) {
        std::fprintf(stderr, "unknown criterion '%s'\n", argv[1]);
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
