// Boundary-layer corrector at the clamped boundary and the two energy
// identities behind the symbols P and Q.
//
// Per tangential frequency xi1 the harmonic mode sinh(|xi1| y)/|xi1| fails
// the clamped conditions at y = 0; adding the corrector -y e^{-|xi1| y}
// (times a low-frequency cutoff h) restores value and slope at zero cost
// outside a layer of width 1/|xi1|.  The bending energy of the corrector
// integrates to 2|xi1| per unit Cauchy datum, and the half-space energy of
// the decaying mode w e^{-|xi1| y} integrates to 2|xi1|^3 per unit trace:
// these are exactly P(xi)^2 = 2|xi| h^2 and Q(xi)^2 = 2|xi|^3.  The
// quadratures here verify the closed forms rather than assume them.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace sensilab::layer {

// Smooth low-frequency cutoff: 0 for |xi| <= xi_low, 1 for
// |xi| >= xi_low + ramp_width, C-infinity ramp between.
struct CutoffSpec {
    double xi_low = 2.0;
    double ramp_width = 2.0;

    static CutoffSpec all_pass() { return {-1.0, 0.0}; }

    double h(double xi) const {
        const double a = std::abs(xi);
        if (ramp_width <= 0.0) return a > xi_low ? 1.0 : 0.0;
        if (a <= xi_low) return 0.0;
        if (a >= xi_low + ramp_width) return 1.0;
        const double t = (a - xi_low) / ramp_width;
        const double f = std::exp(-1.0 / t);
        const double g = std::exp(-1.0 / (1.0 - t));
        return f / (f + g);
    }
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double corrector_symbol(double xi1, double y2, const CutoffSpec& cutoff) {
    if (y2 < 0.0) throw std::invalid_argument("corrector_symbol: y2 must be >= 0");
    return -y2 * std::exp(-std::abs(xi1) * y2) * cutoff.h(xi1);
}

// d^order/dy^order of the corrector profile -y e^{-s y} (cutoff excluded):
// (-1)^{order+1} s^{order-1} (s y - order) e^{-s y} for order >= 1.
inline double corrector_profile_dy(double s, double y2, int order) {
    const double e = std::exp(-s * y2);
    if (order == 0) return -y2 * e;
    double v = (s * y2 - static_cast<double>(order)) * e;
    for (int a = 0; a < order - 1; ++a) v *= s;
    return (order % 2 == 1) ? v : -v;
}

// Modified harmonic mode g * (sinh(|xi1| y)/|xi1| - y e^{-|xi1| y}); both
// the value and the y-derivative vanish at y = 0.
inline std::complex<double> corrected_mode(double xi1, double y2, std::complex<double> g) {
    const double s = std::abs(xi1);
    if (s == 0.0) throw std::invalid_argument("corrected_mode: xi1 must be nonzero");
    return g * (std::sinh(s * y2) / s - y2 * std::exp(-s * y2));
}

namespace detail {

// Composite Simpson over [0, T]; n intervals (made even).
template <typename F>
double simpson(F&& f, double T, int n) {
    if (n % 2) ++n;
    const double h = T / n;
    double acc = f(0.0) + f(T);
    for (int i = 1; i < n; ++i) acc += f(i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace detail

inline constexpr double kTailFactor = 40.0;   // truncate at y2 = 40/|xi1|
inline constexpr int kQuadIntervals = 4096;

// Int_0^inf |(d^2/dy^2 - xi1^2)(corrector * g)|^2 dy, numerically.
// With h == 1 at xi1 this equals 2|xi1| |g|^2.
inline double a_energy_density(double xi1, std::complex<double> g,
                               const CutoffSpec& cutoff = CutoffSpec::all_pass()) {
    const double s = std::abs(xi1);
    if (s == 0.0) throw std::invalid_argument("a_energy_density: xi1 must be nonzero");
    const double hc = cutoff.h(xi1);
    const double g2 = std::norm(g);
    auto integrand = [&](double y) {
        const double d2 = corrector_profile_dy(s, y, 2);
        const double d0 = corrector_profile_dy(s, y, 0);
        const double v = hc * (d2 - s * s * d0);
        return v * v * g2;
    };
    const double T = kTailFactor / s;
    const double val = detail::simpson(integrand, T, kQuadIntervals);
    if (integrand(T) * T > 1e-10 * std::max(val, 1e-300))
        throw QuadratureError("a_energy_density: tail bound violated at truncation point");
    return val;
}

// Int_0^inf ( xi^4 |w|^2 + 2 xi^2 |w'|^2 + |w''|^2 ) dy on w(y) = w e^{-|xi1| y}.
// Equals 2|xi1|^3 |w|^2.
inline double b_energy_density(double xi1, std::complex<double> w) {
    const double s = std::abs(xi1);
    if (s == 0.0) throw std::invalid_argument("b_energy_density: xi1 = 0");
    const double w2 = std::norm(w);
    auto integrand = [&](double y) {
        const double e = std::exp(-s * y);
        const double v0 = e, v1 = -s * e, v2 = s * s * e;
        return (s * s * s * s * v0 * v0 + 2.0 * s * s * v1 * v1 + v2 * v2) * w2;
    };
    const double T = kTailFactor / s;
    const double val = detail::simpson(integrand, T, kQuadIntervals);
    if (integrand(T) * T > 1e-10 * std::max(val, 1e-300))
        throw QuadratureError("b_energy_density: tail bound violated at truncation point");
    return val;
}

inline double p_symbol(double xi1, const CutoffSpec& cutoff) {
    return std::sqrt(2.0 * std::abs(xi1)) * cutoff.h(xi1);
}

enum class QVariant { Homogeneous, Regularized };

inline double q_symbol(double xi1, QVariant variant) {
    const double s = std::abs(xi1);
    switch (variant) {
        case QVariant::Homogeneous: return std::sqrt(2.0) * std::pow(s, 1.5);
        case QVariant::Regularized: return std::sqrt(2.0) * std::pow(1.0 + s * s, 0.75);
    }
    return 0.0;
}

}  // namespace sensilab::layer
