#pragma once

#include <string>
#include <vector>

#include "billab/geometry.hpp"

namespace billab {

// Flat dotted-key run configuration ("key = value" lines, '#' comments).
// Unknown keys are rejected with a line-precise message (config_error).
struct RunConfig {
    // profile
    std::string profile_kind; // stadium | power | gevrey | flat
    double a = 1.0;
    double half_width = 0.0; // default pi
    int k = 2;
    double alpha = 0.0;
    double coeff = 1.0;
    double tau = 1.0;
    std::string sign; // "", "open", "close"
    double wing_span = 0.0; // power/gevrey default 1.0; flat: wall at a + wing_span

    // grid
    double h = 0.0;              // explicit spacing; 0 = derive from policy
    double max_lambda_h = 0.2;   // policy h = max_lambda_h / lambda_max

    // solver
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    int max_modes = 500;
    double tol_eig = 1e-8;
    bool split_parity = true;
    uint64_t seed = 0;

    // separable
    std::vector<int> separable_n_list;
    int separable_count = 1;
    double separable_h_factor = 0.1;
    bool wall_sensitivity = true;

    // quasimode
    std::vector<int> quasimode_n_list;
    double quasimode_p = 0.0; // 0 = fixed cutoff
    double quasimode_c = 1.0;
    double fixed_inner = 0.5;
    double fixed_outer = 0.9;

    // analysis
    double delta = 0.1;
    double eps0 = 0.5;
    double cutoff_p = 1.25; // 1 + eps0/2 at the defaults
    double cutoff_c = 1.0;
    double gamma = 0.0; // 0 = derive from the profile's regularity
    double s_exp = 0.0; // 0 = derive (s_delta) where needed
    bool lemma_norms = false;
    double margin = 1.0; // straightened-strip reach beyond |x| = a

    // output
    bool write_fields = true;
    std::string out_dir;

    std::string raw_text;   // original file contents (hashed into manifests)
    std::string config_sha256;

    DomainProfile make_profile() const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<memory>");

} // namespace billab
