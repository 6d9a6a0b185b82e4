#include "billab/geometry.hpp"

#include <cmath>
#include <numbers>

namespace billab {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_common(double a, double half_width) {
    // a = 0 is the degenerate case with empty rectangular part (e.g. the disc).
    if (!(a >= 0.0)) fail(Status::invalid_argument, "profile: a must be nonnegative");
    if (!(half_width > 0.0)) fail(Status::invalid_argument, "profile: half_width must be positive");
}

// r and its first two derivatives with respect to the wing coordinate t = |x| - a >= 0.
struct WingEval {
    double r = 0.0;
    double dr = 0.0;
    double d2r = 0.0;
};

WingEval eval_wing(const WingProfile& wing, double half_width, double t) {
    WingEval out;
    switch (wing.kind) {
    case WingKind::flat:
        break;
    case WingKind::stadium: {
        const double w = half_width;
        const double y = std::sqrt(std::max(0.0, w * w - t * t));
        out.r = y - w;
        if (y > 0.0) {
            out.dr = -t / y;
            out.d2r = -w * w / (y * y * y);
        } else {
            out.dr = -std::numeric_limits<double>::infinity();
            out.d2r = -std::numeric_limits<double>::infinity();
        }
        break;
    }
    case WingKind::power: {
        const double kappa = wing.exponent();
        if (t == 0.0) {
            out.r = 0.0;
            out.dr = 0.0;
            out.d2r = (kappa == 2.0)   ? 2.0 * wing.coeff
                      : (kappa > 2.0)  ? 0.0
                                       : std::copysign(std::numeric_limits<double>::infinity(),
                                                       wing.coeff);
        } else {
            out.r = wing.coeff * std::pow(t, kappa);
            out.dr = wing.coeff * kappa * std::pow(t, kappa - 1.0);
            out.d2r = wing.coeff * kappa * (kappa - 1.0) * std::pow(t, kappa - 2.0);
        }
        break;
    }
    case WingKind::gevrey: {
        if (t <= 0.0) break; // flat to infinite order
        const double tau = wing.tau;
        const double e = std::exp(-std::pow(t, -tau));
        out.r = wing.coeff * e;
        out.dr = wing.coeff * e * tau * std::pow(t, -tau - 1.0);
        out.d2r = wing.coeff * e *
                  (tau * tau * std::pow(t, -2.0 * tau - 2.0) -
                   tau * (tau + 1.0) * std::pow(t, -tau - 2.0));
        break;
    }
    }
    return out;
}

const WingProfile& wing_at(const DomainProfile& p, double x) {
    return x < 0.0 ? p.left_wing : p.right_wing;
}

} // namespace

DomainProfile make_stadium(double a, double half_width) {
    validate_common(a, half_width);
    DomainProfile p;
    p.a = a;
    p.half_width = half_width;
    p.left_wing.kind = WingKind::stadium;
    p.left_wing.coeff = -1.0; // closes inward toward the tip
    p.right_wing = p.left_wing;
    p.x_extent = a + half_width;
    p.id = "stadium";
    return p;
}

DomainProfile make_flat(double a, double half_width, double x_extent) {
    validate_common(a, half_width);
    if (!(x_extent >= a)) fail(Status::invalid_argument, "profile: x_extent must be >= a");
    DomainProfile p;
    p.a = a;
    p.half_width = half_width;
    p.x_extent = x_extent;
    p.id = "flat";
    return p;
}

DomainProfile make_power(double a, double half_width, int k, double alpha, double coeff,
                         double wing_span) {
    validate_common(a, half_width);
    if (k < 1 || alpha < 0.0 || alpha > 1.0)
        fail(Status::invalid_argument, "power wing: need integer k >= 1 and alpha in [0,1]");
    if (static_cast<double>(k) + alpha <= 1.0)
        fail(Status::regularity_error, "power wing: k + alpha must exceed 1 (C^1 boundary)");
    if (coeff == 0.0) fail(Status::invalid_argument, "power wing: coeff must be nonzero");
    if (!(wing_span > 0.0)) fail(Status::invalid_argument, "power wing: wing_span must be positive");

    DomainProfile p;
    p.a = a;
    p.half_width = half_width;
    p.left_wing.kind = WingKind::power;
    p.left_wing.k = k;
    p.left_wing.alpha = alpha;
    p.left_wing.coeff = coeff;
    p.right_wing = p.left_wing;
    p.x_extent = a + wing_span;
    if (coeff < 0.0 && half_width + coeff * std::pow(wing_span, p.left_wing.exponent()) <= 0.0)
        fail(Status::invalid_argument, "power wing: domain pinches off before x_extent");
    p.id = "power_k" + std::to_string(k) + "_a" + std::to_string(alpha).substr(0, 4) +
           (coeff > 0 ? "_open" : "_close");
    return p;
}

DomainProfile make_gevrey(double a, double half_width, double tau, double coeff,
                          double wing_span) {
    validate_common(a, half_width);
    if (!(tau > 0.0)) fail(Status::invalid_argument, "gevrey wing: tau must be positive");
    if (coeff == 0.0) fail(Status::invalid_argument, "gevrey wing: coeff must be nonzero");
    if (!(wing_span > 0.0)) fail(Status::invalid_argument, "gevrey wing: wing_span must be positive");

    DomainProfile p;
    p.a = a;
    p.half_width = half_width;
    p.left_wing.kind = WingKind::gevrey;
    p.left_wing.tau = tau;
    p.left_wing.coeff = coeff;
    p.right_wing = p.left_wing;
    p.x_extent = a + wing_span;
    if (coeff < 0.0 && half_width + coeff * std::exp(-std::pow(wing_span, -tau)) <= 0.0)
        fail(Status::invalid_argument, "gevrey wing: domain pinches off before x_extent");
    p.id = std::string("gevrey") + (coeff > 0 ? "_open" : "_close");
    return p;
}

double eval_Y(const DomainProfile& profile, double x) {
    const double ax = std::abs(x);
    if (ax > profile.x_extent)
        fail(Status::domain_error, "eval_Y: |x| exceeds x_extent");
    if (ax <= profile.a) return profile.half_width;
    const WingEval we = eval_wing(wing_at(profile, x), profile.half_width, ax - profile.a);
    return profile.half_width + we.r;
}

double eval_Y_deriv(const DomainProfile& profile, double x, int order, bool from_wing) {
    if (order != 1 && order != 2)
        fail(Status::invalid_argument, "eval_Y_deriv: order must be 1 or 2");
    const double ax = std::abs(x);
    if (ax > profile.x_extent)
        fail(Status::domain_error, "eval_Y_deriv: |x| exceeds x_extent");
    if (ax < profile.a || (ax == profile.a && !from_wing)) return 0.0;

    const WingProfile& wing = wing_at(profile, x);
    const WingEval we = eval_wing(wing, profile.half_width, ax - profile.a);
    const double value = (order == 1) ? we.dr : we.d2r;
    if (!std::isfinite(value))
        fail(Status::regularity_error, "eval_Y_deriv: one-sided derivative does not exist here");
    // Left wing: t = -x - a, so odd-order t-derivatives flip sign.
    if (order == 1 && x < 0.0) return -value;
    return value;
}

bool contains(const DomainProfile& profile, double x, double y) {
    if (std::abs(x) > profile.x_extent) return false;
    return std::abs(y) < eval_Y(profile, x);
}

double max_Y(const DomainProfile& profile) {
    double m = profile.half_width;
    for (const WingProfile* wing : {&profile.left_wing, &profile.right_wing}) {
        if ((wing->kind == WingKind::power || wing->kind == WingKind::gevrey) &&
            wing->coeff > 0.0) {
            const WingEval we = eval_wing(*wing, profile.half_width, profile.wing_span());
            m = std::max(m, profile.half_width + we.r);
        }
    }
    return m;
}

double domain_area(const DomainProfile& profile) {
    double area = 2.0 * profile.a * 2.0 * profile.half_width;
    for (const WingProfile* wing : {&profile.left_wing, &profile.right_wing}) {
        const double span = profile.wing_span();
        if (span <= 0.0) continue;
        if (wing->kind == WingKind::stadium) {
            area += 0.5 * kPi * profile.half_width * profile.half_width;
            continue;
        }
        if (wing->kind == WingKind::flat) {
            area += 2.0 * profile.half_width * span;
            continue;
        }
        // Simpson quadrature of 2Y over the wing.
        const int n = 4096;
        const double h = span / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = i * h;
            const double y = profile.half_width + eval_wing(*wing, profile.half_width, t).r;
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            s += w * 2.0 * y;
        }
        area += s * h / 3.0;
    }
    return area;
}

} // namespace billab
