#pragma once

#include <map>
#include <string>
#include <vector>

#include "billab/cutoff.hpp"
#include "billab/grid.hpp"
#include "billab/straighten.hpp"

namespace billab {

// Wing-mass functionals over {|x| > a} of a (not necessarily normalized) field:
//   M0 = ||u||, M1 = ||lambda^-1 d_x u||, M2 = ||lambda^-2 d_x^2 u||,
// all divided by ||u||_L2(Omega).  Centered differences, one-sided at cut cells.
struct WingMasses {
    double M0 = 0.0, M1 = 0.0, M2 = 0.0;
    double max() const { return std::max(M0, std::max(M1, M2)); }
};

WingMasses wing_masses(const Field& u, double lambda, double a);

// ||u||^2 restricted to the rectangle / wings (node-based region assignment).
std::pair<double, double> region_split_mass(const Field& u, double a);

struct LemmaNorm {
    double value = 0.0;
    double ceiling = 0.0;
    double ratio = 0.0;
};

using LemmaNorms = std::map<std::string, LemmaNorm>; // keys: ny, nx, nxy, nyy, nxx

// Weighted derivative norms of the straightened field v with the ramp/Heaviside
// weights taken from both wings (R(|x|-a)); psi from `spec` localizes near R.
//   C^{1,1} case: weights H, H, R, R^2, H with exponent-delta ceilings.
LemmaNorms lemma_norms_c11(const StripField& v, double lambda, double eps0, double delta0,
                           const CutoffSpec& spec);
//   C^{k,alpha} case (gamma = k + alpha - 1 > 1): weights H, H, R^gamma,
//   R^(gamma+1), H with (s, p, gamma) ceilings.
LemmaNorms lemma_norms_cka(const StripField& v, double lambda, double gamma, double p, double s,
                           const CutoffSpec& spec);

struct TheoremEntry {
    double lambda = 0.0;
    double E = 0.0;
    WingMasses masses;
    std::string mode_id;
};

struct TheoremRowVerdict {
    std::string mode_id;
    double lambda = 0.0;
    double E = 0.0;
    double T = 0.0;
    bool hypothesis = false; // E <= lambda^-eps0
    bool fail_flag = false;  // hypothesis holds yet T below 1% of median
};

struct TheoremVerdict {
    std::string verdict; // "PASS" | "FAIL" | "NOT-APPLICABLE"
    double envelope_slope = 0.0;
    double envelope_stderr = 0.0;
    double s_used = 0.0;
    int alarms = 0;
    std::vector<TheoremRowVerdict> rows;
};

// T(lambda) = max(M0,M1,M2) * lambda^s with s = 2 + delta (or s_override).
// PASS when the per-unit-lambda-bin lower envelope of T has fitted log-log slope
// >= -delta/2; rows with small E but T under 1% of the median are flagged.
TheoremVerdict theorem_check(const std::vector<TheoremEntry>& entries, double delta, double eps0,
                             double s_override = 0.0);

} // namespace billab
