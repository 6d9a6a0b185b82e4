#include "billab/massfunc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "billab/scaling.hpp"

namespace billab {

namespace {

// x-derivatives at a dof: centered when both neighbors exist, one-sided at cuts.
struct XDerivs {
    double ux = 0.0, uxx = 0.0;
};

XDerivs x_derivs(const Field& u, int i, int j) {
    const Grid& g = *u.grid;
    const double h = g.h();
    auto val = [&](int ii) { return u.values[g.node(ii, j)]; };
    const bool has_e = i + 1 < g.nx() && g.interior(i + 1, j);
    const bool has_w = i - 1 >= 0 && g.interior(i - 1, j);
    XDerivs d;
    if (has_e && has_w) {
        d.ux = (val(i + 1) - val(i - 1)) / (2 * h);
        d.uxx = (val(i + 1) - 2 * val(i) + val(i - 1)) / (h * h);
    } else if (has_e) {
        d.ux = (val(i + 1) - val(i)) / h;
        if (i + 2 < g.nx() && g.interior(i + 2, j))
            d.uxx = (val(i + 2) - 2 * val(i + 1) + val(i)) / (h * h);
    } else if (has_w) {
        d.ux = (val(i) - val(i - 1)) / h;
        if (i - 2 >= 0 && g.interior(i - 2, j))
            d.uxx = (val(i) - 2 * val(i - 1) + val(i - 2)) / (h * h);
    }
    return d;
}

double lam_max(std::initializer_list<double> exps, double lambda) {
    double m = -std::numeric_limits<double>::infinity();
    for (double e : exps) m = std::max(m, e);
    return std::pow(lambda, m);
}

} // namespace

WingMasses wing_masses(const Field& u, double lambda, double a) {
    if (!(lambda > 0.0)) fail(Status::invalid_argument, "wing_masses: lambda must be positive");
    const Grid& g = *u.grid;
    double s_tot = 0.0, s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int d = 0; d < g.n_interior(); ++d) {
        const int i = g.dof_i(d), j = g.dof_j(d);
        const double w = g.mass()[d];
        const double v = u.values[g.node(i, j)];
        s_tot += w * v * v;
        if (std::abs(g.x(i)) > a) {
            const XDerivs der = x_derivs(u, i, j);
            s0 += w * v * v;
            s1 += w * der.ux * der.ux;
            s2 += w * der.uxx * der.uxx;
        }
    }
    if (!(s_tot > 0.0)) fail(Status::invalid_argument, "wing_masses: zero field");
    WingMasses m;
    const double nrm = std::sqrt(s_tot);
    m.M0 = std::sqrt(s0) / nrm;
    m.M1 = std::sqrt(s1) / (lambda * nrm);
    m.M2 = std::sqrt(s2) / (lambda * lambda * nrm);
    return m;
}

std::pair<double, double> region_split_mass(const Field& u, double a) {
    const Grid& g = *u.grid;
    double rect = 0.0, wings = 0.0;
    for (int d = 0; d < g.n_interior(); ++d) {
        const int i = g.dof_i(d), j = g.dof_j(d);
        const double w = g.mass()[d];
        const double v = u.values[g.node(i, j)];
        (std::abs(g.x(i)) > a ? wings : rect) += w * v * v;
    }
    return {rect, wings};
}

namespace {

// Weighted strip norm || weight(x) * D v ||_(L2 dx dy') with centered differences.
enum class Deriv { dy, dx, dxy, dyy, dxx };

double strip_norm(const StripField& v, Deriv which,
                  const std::function<double(double)>& weight) {
    const auto& sg = *v.grid;
    const int nx = sg.nx, ny = sg.ny;
    const double hx = sg.hx, hy = sg.hy();
    auto at = [&](int i, int j) -> double {
        if (i < 0 || i >= nx || j < 0 || j >= ny) return 0.0;
        return v.values[sg.node(i, j)];
    };
    double s = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double wy = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
        for (int i = 0; i < nx; ++i) {
            const double wgt = weight(sg.x(i));
            if (wgt == 0.0) continue;
            double d = 0.0;
            switch (which) {
            case Deriv::dy: d = (at(i, j + 1) - at(i, j - 1)) / (2 * hy); break;
            case Deriv::dx: d = (at(i + 1, j) - at(i - 1, j)) / (2 * hx); break;
            case Deriv::dxy:
                d = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) /
                    (4 * hx * hy);
                break;
            case Deriv::dyy: d = (at(i, j + 1) - 2 * at(i, j) + at(i, j - 1)) / (hy * hy); break;
            case Deriv::dxx: d = (at(i + 1, j) - 2 * at(i, j) + at(i - 1, j)) / (hx * hx); break;
            }
            const double wx = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
            s += wx * wy * wgt * wgt * d * d;
        }
    }
    return std::sqrt(s * hx * hy);
}

void warn_boundary_trace(const StripField& v) {
    const auto& sg = *v.grid;
    double trace = 0.0, amp = 0.0;
    for (int i = 0; i < sg.nx; ++i) {
        trace = std::max({trace, std::abs(v.values[sg.node(i, 0)]),
                          std::abs(v.values[sg.node(i, sg.ny - 1)])});
        for (int j = 0; j < sg.ny; ++j) amp = std::max(amp, std::abs(v.values[sg.node(i, j)]));
    }
    if (amp > 0.0 && trace > 1e-8 * amp)
        std::fprintf(stderr,
                     "[massfunc] warning: v does not vanish at y' = +-1 (trace %.3g of max)\n",
                     trace / amp);
}

LemmaNorms lemma_norms_impl(const StripField& v, const CutoffSpec& spec, double gamma_xy,
                            double gamma_yy, const std::map<std::string, double>& ceilings) {
    warn_boundary_trace(v);
    const Cutoff psi = make_psi(spec);
    const double a = spec.a;
    auto wH = [&](double x) { return heaviside(std::abs(x), a) * psi.value(x); };
    auto wR = [&](double p) {
        return std::function<double(double)>([&, p](double x) {
            const double r = ramp(std::abs(x), a);
            return r > 0.0 ? std::pow(r, p) * psi.value(x) : 0.0;
        });
    };
    LemmaNorms out;
    out["ny"] = {strip_norm(v, Deriv::dy, wH), ceilings.at("ny"), 0.0};
    out["nx"] = {strip_norm(v, Deriv::dx, wH), ceilings.at("nx"), 0.0};
    out["nxy"] = {strip_norm(v, Deriv::dxy, wR(gamma_xy)), ceilings.at("nxy"), 0.0};
    out["nyy"] = {strip_norm(v, Deriv::dyy, wR(gamma_yy)), ceilings.at("nyy"), 0.0};
    out["nxx"] = {strip_norm(v, Deriv::dxx, wH), ceilings.at("nxx"), 0.0};
    for (auto& [k, n] : out) n.ratio = n.ceiling > 0.0 ? n.value / n.ceiling : 0.0;
    return out;
}

} // namespace

LemmaNorms lemma_norms_c11(const StripField& v, double lambda, double eps0, double delta0,
                           const CutoffSpec& spec) {
    if (!(lambda > 0.0) || !(eps0 > 0.0) || !(delta0 > 0.0))
        fail(Status::invalid_argument, "lemma_norms_c11: lambda, eps0, delta0 must be positive");
    std::map<std::string, double> ceil;
    ceil["ny"] = lam_max({-1 - delta0, -1 - eps0 / 2}, lambda);
    ceil["nx"] = std::pow(lambda, -1 - delta0);
    ceil["nxy"] = lam_max({-eps0 / 2, -delta0}, lambda);
    ceil["nyy"] = lam_max({-2 - delta0 - eps0, -2 - 1.5 * eps0}, lambda);
    ceil["nxx"] = lam_max({-delta0, -eps0 / 2}, lambda);
    return lemma_norms_impl(v, spec, 1.0, 2.0, ceil);
}

LemmaNorms lemma_norms_cka(const StripField& v, double lambda, double gamma, double p, double s,
                           const CutoffSpec& spec) {
    if (gamma <= 1.0)
        fail(Status::invalid_argument,
             "lemma_norms_cka: gamma = k + alpha - 1 must exceed 1 (C^{1,1} routes to lemma_norms_c11)");
    if (!(p > 0.0) || p > 1.0 || s < 0.0 || s > 2.0)
        fail(Status::invalid_argument, "lemma_norms_cka: need p in (0,1], s in [0,2]");
    std::map<std::string, double> ceil;
    ceil["ny"] = lam_max({1 - s, -p * (2 * gamma - 1)}, lambda);
    ceil["nx"] = lam_max({1 - s, -p * (3 * gamma - 1)}, lambda);
    ceil["nxy"] =
        lam_max({2 - s - p * gamma, 1 - p * (2 * gamma - 1), (2 - s - p * (3 * gamma - 2)) / 2},
                lambda);
    ceil["nyy"] = lam_max({2 - s - p * (gamma + 1), 1 - 3 * p * gamma}, lambda);
    ceil["nxx"] = lam_max({2 - s, 1 - p * (2 * gamma - 1)}, lambda);
    return lemma_norms_impl(v, spec, gamma, gamma + 1.0, ceil);
}

TheoremVerdict theorem_check(const std::vector<TheoremEntry>& entries, double delta, double eps0,
                             double s_override) {
    if (entries.size() < 5)
        fail(Status::insufficient_data, "theorem_check: need at least 5 modes");
    if (!(delta > 0.0) || !(eps0 > 0.0))
        fail(Status::invalid_argument, "theorem_check: delta and eps0 must be positive");

    TheoremVerdict out;
    out.s_used = s_override > 0.0 ? s_override : 2.0 + delta;

    bool any_mass = false;
    std::vector<double> ts;
    for (const auto& e : entries) {
        TheoremRowVerdict row;
        row.mode_id = e.mode_id;
        row.lambda = e.lambda;
        row.E = e.E;
        row.T = e.masses.max() * std::pow(e.lambda, out.s_used);
        row.hypothesis = e.E <= std::pow(e.lambda, -eps0);
        out.rows.push_back(row);
        ts.push_back(row.T);
        if (e.masses.max() > 0.0) any_mass = true;
    }
    if (!any_mass) {
        out.verdict = "NOT-APPLICABLE"; // wing region empty
        return out;
    }

    std::vector<double> sorted = ts;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (auto& row : out.rows) {
        row.fail_flag = row.hypothesis && row.T < 0.01 * median;
        if (row.fail_flag) ++out.alarms;
    }

    // lower envelope: per-unit-lambda-bin minimum of T
    std::map<long, std::pair<double, double>> bins; // bin -> (lambda at min, min T)
    for (const auto& row : out.rows) {
        if (!(row.T > 0.0)) continue;
        const long b = static_cast<long>(std::floor(row.lambda));
        auto it = bins.find(b);
        if (it == bins.end() || row.T < it->second.second)
            bins[b] = {row.lambda, row.T};
    }
    std::vector<std::pair<double, double>> pts;
    if (bins.size() >= 5)
        for (auto& [b, v] : bins) pts.push_back(v);
    else
        for (const auto& row : out.rows)
            if (row.T > 0.0) pts.emplace_back(row.lambda, row.T);

    if (pts.size() >= 5) {
        const ScalingFit fit = fit_exponent(pts);
        out.envelope_slope = fit.slope;
        out.envelope_stderr = fit.stderr_slope;
        out.verdict = (fit.slope >= -0.5 * delta && out.alarms == 0) ? "PASS" : "FAIL";
    } else {
        out.verdict = out.alarms == 0 ? "PASS" : "FAIL";
    }
    return out;
}

} // namespace billab
