#include "billab/scaling.hpp"

#include <algorithm>
#include <cmath>

namespace billab {

double compute_s_delta(int k, double alpha, double delta) {
    if (!(delta > 0.0)) fail(Status::invalid_argument, "compute_s_delta: delta must be positive");
    if (k < 1 || alpha < 0.0 || alpha > 1.0)
        fail(Status::invalid_argument, "compute_s_delta: need k >= 1, alpha in [0,1]");
    const double kappa = static_cast<double>(k) + alpha;
    if (kappa < 2.0)
        fail(Status::regularity_error, "compute_s_delta: unsupported regularity k + alpha < 2");
    return 1.0 + std::max(1.0 / kappa, (1.0 + delta) / (2.0 * kappa - 3.0)) + delta;
}

ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 5)
        fail(Status::insufficient_data, "fit_exponent: need at least 5 points");
    const int n = static_cast<int>(points.size());
    std::vector<double> lx(n), ly(n);
    double lam_min = points[0].first, lam_max = points[0].first;
    for (int i = 0; i < n; ++i) {
        if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
            fail(Status::invalid_argument, "fit_exponent: lambda and value must be positive");
        lx[i] = std::log(points[i].first);
        ly[i] = std::log(points[i].second);
        lam_min = std::min(lam_min, points[i].first);
        lam_max = std::max(lam_max, points[i].first);
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) { mx += lx[i]; my += ly[i]; }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) fail(Status::invalid_argument, "fit_exponent: degenerate abscissae");

    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += r * r;
    }
    fit.stderr_slope = std::sqrt(std::max(0.0, rss / (n - 2)) / sxx);
    fit.n_points = n;
    fit.lambda_range = {lam_min, lam_max};
    return fit;
}

ExponentRow make_exponent_row(const std::string& profile, const std::string& quantity,
                              double delta, double theory_floor,
                              const std::vector<std::pair<double, double>>& points) {
    const ScalingFit fit = fit_exponent(points);
    ExponentRow row;
    row.profile = profile;
    row.quantity = quantity;
    row.delta = delta;
    row.theory_floor = theory_floor;
    row.fitted_slope = fit.slope;
    row.stderr_slope = fit.stderr_slope;
    row.n_modes = fit.n_points;
    row.lambda_range = fit.lambda_range;
    if (std::isnan(theory_floor)) {
        row.margin = std::numeric_limits<double>::quiet_NaN();
        row.verdict = "INFO";
    } else {
        row.margin = fit.slope - theory_floor;
        row.verdict = fit.slope >= theory_floor ? "PASS" : "INFO";
    }
    return row;
}

} // namespace billab
