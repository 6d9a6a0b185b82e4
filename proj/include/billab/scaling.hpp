#pragma once

#include <string>
#include <utility>
#include <vector>

#include "billab/errors.hpp"

namespace billab {

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    int n_points = 0;
    std::pair<double, double> lambda_range{0.0, 0.0};
};

// Regularity exponent s_delta = 1 + max{ 1/(k+alpha), (1+delta)/(2(k+alpha)-3) } + delta
// for C^{k,alpha} wings with k + alpha >= 2.  Tends to 1 + delta as k + alpha -> inf.
double compute_s_delta(int k, double alpha, double delta);

// Ordinary least squares on (log lambda, log value).  Requires >= 5 points, values > 0.
ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& points);

struct ExponentRow {
    std::string profile;
    std::string quantity;      // which sweep column was fitted
    double delta = 0.0;
    double theory_floor = 0.0; // -s_delta or -(2+delta); NaN when no floor is claimed
    double fitted_slope = 0.0;
    double stderr_slope = 0.0;
    double margin = 0.0; // fitted_slope - theory_floor
    std::string verdict; // "PASS" | "INFO"
    int n_modes = 0;
    std::pair<double, double> lambda_range{0.0, 0.0};
};

// One row per named sweep: fit the exponent and compare against the theoretical
// floor for the profile's regularity class (INFO when no floor applies).
ExponentRow make_exponent_row(const std::string& profile, const std::string& quantity,
                              double delta, double theory_floor,
                              const std::vector<std::pair<double, double>>& points);

} // namespace billab
