#include "billab/cutoff.hpp"

#include <cmath>
#include <mutex>

namespace billab {

namespace {

// bump(t) = exp(-1/(1-t^2)) on (-1,1), zero outside.
double bump(double t) {
    const double s = 1.0 - t * t;
    if (s <= 0.0) return 0.0;
    return std::exp(-1.0 / s);
}

// d^m bump = bump(t) * Q_m(t) / (1-t^2)^(2m) with the polynomial recursion
//   Q_1 = -2t,  Q_{m+1} = Q_m' (1-t^2)^2 + 4 m t (1-t^2) Q_m + Q_1 Q_m.
class BumpDerivs {
public:
    BumpDerivs() {
        std::vector<double> q{0.0, -2.0}; // Q_1
        q_[0] = q;
        for (int m = 1; m < 4; ++m) q_[m] = next(q_[m - 1], m);
    }

    double eval(double t, int order) const {
        const double s = 1.0 - t * t;
        if (s <= 0.0) return 0.0;
        return bump(t) * horner(q_[order - 1], t) / std::pow(s, 2.0 * order);
    }

private:
    static double horner(const std::vector<double>& c, double t) {
        double v = 0.0;
        for (size_t i = c.size(); i-- > 0;) v = v * t + c[i];
        return v;
    }
    static std::vector<double> mul(const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> r(a.size() + b.size() - 1, 0.0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        return r;
    }
    static std::vector<double> add(std::vector<double> a, const std::vector<double>& b) {
        if (b.size() > a.size()) a.resize(b.size(), 0.0);
        for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
        return a;
    }
    static std::vector<double> derivative(const std::vector<double>& a) {
        if (a.size() <= 1) return {0.0};
        std::vector<double> r(a.size() - 1);
        for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<double>(i);
        return r;
    }
    static std::vector<double> next(const std::vector<double>& qm, int m) {
        const std::vector<double> s{1.0, 0.0, -1.0};  // 1 - t^2
        const std::vector<double> q1{0.0, -2.0};
        auto term1 = mul(derivative(qm), mul(s, s));
        auto term2 = mul(std::vector<double>{0.0, 4.0 * m}, mul(s, qm));
        auto term3 = mul(q1, qm);
        return add(add(term1, term2), term3);
    }

    std::array<std::vector<double>, 4> q_;
};

const BumpDerivs& bump_derivs() {
    static const BumpDerivs instance;
    return instance;
}

// Normalized antiderivative B(t) = int_{-1}^t bump / int_{-1}^1 bump, tabulated once
// on a fine grid and evaluated by cubic Hermite with the exact derivative bump/N.
struct BumpIntegralTable {
    static constexpr int kPanels = 8192;
    std::array<double, kPanels + 1> value{};
    double norm = 0.0;

    BumpIntegralTable() {
        const double h = 2.0 / kPanels;
        double acc = 0.0;
        value[0] = 0.0;
        for (int i = 0; i < kPanels; ++i) {
            const double t0 = -1.0 + i * h;
            const double t1 = t0 + h;
            acc += (h / 6.0) * (bump(t0) + 4.0 * bump(0.5 * (t0 + t1)) + bump(t1));
            value[i + 1] = acc;
        }
        norm = acc;
    }

    double eval(double t) const {
        if (t <= -1.0) return 0.0;
        if (t >= 1.0) return 1.0;
        const double h = 2.0 / kPanels;
        const double s = (t + 1.0) / h;
        int i = static_cast<int>(s);
        if (i >= kPanels) i = kPanels - 1;
        const double u = s - i;
        const double t0 = -1.0 + i * h;
        const double f0 = value[i], f1 = value[i + 1];
        const double d0 = bump(t0) * h, d1 = bump(t0 + h) * h;
        const double u2 = u * u, u3 = u2 * u;
        const double hermite = (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * d0 +
                               (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * d1;
        return hermite / norm;
    }
};

const BumpIntegralTable& bump_integral() {
    static const BumpIntegralTable instance;
    return instance;
}

} // namespace

double ramp(double x, double a) { return x > a ? x - a : 0.0; }
double heaviside(double x, double a) { return x > a ? 1.0 : 0.0; }

Cutoff::Cutoff(double a, double inner, double outer) : a_(a), inner_(inner), outer_(outer) {
    if (!(a > 0.0) || inner < 0.0 || !(outer > inner))
        fail(Status::invalid_argument, "cutoff: need a > 0 and 0 <= inner < outer");
}

double Cutoff::value(double x) const {
    const double ax = std::abs(x);
    if (ax <= a_ + inner_) return 1.0;
    if (ax >= a_ + outer_) return 0.0;
    const double t = -1.0 + 2.0 * (ax - a_ - inner_) / (outer_ - inner_);
    return 1.0 - bump_integral().eval(t);
}

double Cutoff::deriv(double x, int order) const {
    if (order < 1 || order > 4) fail(Status::invalid_argument, "cutoff: deriv order must be 1..4");
    const double ax = std::abs(x);
    if (ax <= a_ + inner_ || ax >= a_ + outer_) return 0.0;
    const double w = outer_ - inner_;
    const double t = -1.0 + 2.0 * (ax - a_ - inner_) / w;
    const double scale = std::pow(2.0 / w, order);
    double base;
    if (order == 1)
        base = bump(t) / bump_integral().norm;
    else
        base = bump_derivs().eval(t, order - 1) / bump_integral().norm;
    double v = -base * scale;
    // mirror flank: chi(x) = chi(-x), odd orders flip sign for x < 0
    if (x < 0.0 && (order % 2) == 1) v = -v;
    return v;
}

std::array<double, 5> Cutoff::sampled_derivative_maxima() const {
    std::array<double, 5> m{1.0, 0.0, 0.0, 0.0, 0.0};
    const int samples = 4001;
    for (int i = 0; i < samples; ++i) {
        const double x = a_ + inner_ + (outer_ - inner_) * i / (samples - 1.0);
        for (int o = 1; o <= 4; ++o) m[o] = std::max(m[o], std::abs(deriv(x, o)));
    }
    return m;
}

std::array<double, 5> Cutoff::measured_constants(double lambda, double p) const {
    if (!(lambda > 0.0)) fail(Status::invalid_argument, "cutoff: lambda must be positive");
    auto m = sampled_derivative_maxima();
    std::array<double, 5> c{1.0, 0.0, 0.0, 0.0, 0.0};
    for (int o = 1; o <= 4; ++o) c[o] = m[o] / std::pow(lambda, o * p);
    return c;
}

void Cutoff::require_resolution(double h, int min_cells) const {
    if (flank_width() < min_cells * h)
        fail(Status::resolution_error, "cutoff: flank narrower than " +
                                           std::to_string(min_cells) + " grid cells");
}

namespace {
double reach(const CutoffSpec& spec) {
    if (!(spec.lambda > 0.0) || !(spec.p > 0.0) || !(spec.c >= 1.0) || !(spec.a > 0.0))
        fail(Status::invalid_argument, "cutoff spec: need a > 0, lambda > 0, p > 0, c >= 1");
    return spec.c * std::pow(spec.lambda, -spec.p);
}
} // namespace

Cutoff make_chi(const CutoffSpec& spec) { return Cutoff(spec.a, 0.0, reach(spec)); }
Cutoff make_psi(const CutoffSpec& spec) {
    const double r = reach(spec);
    return Cutoff(spec.a, r, 3.0 * r);
}
Cutoff make_psi_tilde(const CutoffSpec& spec) {
    const double r = reach(spec);
    return Cutoff(spec.a, 3.0 * r, 6.0 * r);
}

} // namespace billab
