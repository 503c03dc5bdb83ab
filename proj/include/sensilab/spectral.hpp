// Frequency grids, quadrature-based inverse Fourier transforms and
// oscillation diagnostics shared by the strip and annulus layers.
//
// Convention: u(x) = (1/2pi) Int uhat(xi) e^{i x xi} dxi, approximated by
// the trapezoid rule on a uniform symmetric grid.  The grid has an even
// number of samples, so xi = 0 is never a node (the eps = 0 strip formula
// is singular there).  The trapezoid path is the reference contract; grids
// stay small enough (<= 2^16) that no FFT is needed.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "sensilab/log_complex.hpp"

namespace sensilab::spectral {

struct FreqGrid {
    double xi_max;
    int n_samples;

    FreqGrid(double xi_max_, int n_samples_) : xi_max(xi_max_), n_samples(n_samples_) {
        if (!(xi_max > 0.0)) throw std::invalid_argument("FreqGrid: xi_max must be positive");
        if (n_samples < 2 || n_samples % 2 != 0)
            throw std::invalid_argument("FreqGrid: n_samples must be even and >= 2");
    }

    double spacing() const { return 2.0 * xi_max / (n_samples - 1); }
    double node(int i) const { return -xi_max + i * spacing(); }

    std::vector<double> nodes() const {
        std::vector<double> out(static_cast<std::size_t>(n_samples));
        for (int i = 0; i < n_samples; ++i) out[static_cast<std::size_t>(i)] = node(i);
        return out;
    }
};

// Spectrum samples in log-polar form on a FreqGrid.
struct Spectrum {
    FreqGrid grid;
    std::vector<LogComplex> values;

    Spectrum(FreqGrid g, std::vector<LogComplex> v) : grid(g), values(std::move(v)) {
        if (static_cast<int>(values.size()) != grid.n_samples)
            throw std::invalid_argument("Spectrum: sample count does not match grid");
    }

    // Linear complex samples; refuses to silently overflow.
    std::vector<std::complex<double>> linear() const {
        std::vector<std::complex<double>> out(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i].log_mod > 700.0)
                throw std::range_error("Spectrum::linear: sample exceeds double range; "
                                       "keep this spectrum in log form");
            out[i] = values[i].value();
        }
        return out;
    }
};

struct TraceSignal {
    std::vector<double> x_samples;               // uniform
    std::vector<std::complex<double>> values;
    std::string provenance;

    double x_spacing() const {
        return x_samples.size() > 1 ? x_samples[1] - x_samples[0] : 0.0;
    }
};

struct OscillationReport {
    int zero_crossings = 0;   // filled by the caller once a trace exists
    double peak_xi = 0.0;
    double peak_log10_mod = 0.0;
    double envelope_halfwidth = 0.0;
};

inline std::complex<double> inverse_transform_at(const Spectrum& spec, double x) {
    auto lin = spec.linear();
    const double dxi = spec.grid.spacing();
    std::complex<double> acc = 0.0;
    for (int i = 0; i < spec.grid.n_samples; ++i) {
        const double w = (i == 0 || i == spec.grid.n_samples - 1) ? 0.5 : 1.0;
        const double xi = spec.grid.node(i);
        if (!std::isfinite(lin[static_cast<std::size_t>(i)].real()) ||
            !std::isfinite(lin[static_cast<std::size_t>(i)].imag()))
            throw std::invalid_argument("inverse_transform: non-finite spectrum sample");
        acc += w * lin[static_cast<std::size_t>(i)] * std::polar(1.0, x * xi);
    }
    return acc * dxi / (2.0 * M_PI);
}

// Trapezoid synthesis on a uniform x-grid.  The phase factors advance by a
// constant rotation per frequency node; the rotation is re-anchored with an
// exact exponential every few hundred steps to stop drift.
inline TraceSignal inverse_transform(const Spectrum& spec, double x_lo, double x_hi, int nx,
                                     std::string provenance = {}) {
    if (nx < 2) throw std::invalid_argument("inverse_transform: nx must be >= 2");
    if (!(x_hi > x_lo)) throw std::invalid_argument("inverse_transform: empty x range");
    const double dx = (x_hi - x_lo) / (nx - 1);
    if (dx > M_PI / spec.grid.xi_max + 1e-12)
        throw std::invalid_argument("inverse_transform: x spacing too coarse for xi_max "
                                    "(need dx <= pi/xi_max)");

    auto lin = spec.linear();
    for (const auto& z : lin)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("inverse_transform: non-finite spectrum sample");

    const int n = spec.grid.n_samples;
    const double dxi = spec.grid.spacing();
    std::vector<double> w(static_cast<std::size_t>(n), 1.0);
    w.front() = w.back() = 0.5;

    TraceSignal sig;
    sig.provenance = std::move(provenance);
    sig.x_samples.resize(static_cast<std::size_t>(nx));
    sig.values.resize(static_cast<std::size_t>(nx));
    constexpr int kAnchor = 256;
    for (int a = 0; a < nx; ++a) {
        const double x = x_lo + a * dx;
        sig.x_samples[static_cast<std::size_t>(a)] = x;
        const std::complex<double> step = std::polar(1.0, x * dxi);
        std::complex<double> rot = std::polar(1.0, x * spec.grid.node(0));
        std::complex<double> acc = 0.0;
        for (int i = 0; i < n; ++i) {
            if (i % kAnchor == 0) rot = std::polar(1.0, x * spec.grid.node(i));
            acc += w[static_cast<std::size_t>(i)] * lin[static_cast<std::size_t>(i)] * rot;
            rot *= step;
        }
        sig.values[static_cast<std::size_t>(a)] = acc * dxi / (2.0 * M_PI);
    }
    return sig;
}

// Sign changes of Re(values) on [a, b] with hysteresis: a sample only
// arms/flips the detector once |Re| exceeds 1e-3 of the window maximum,
// which suppresses quadrature ripple around zero.
inline int count_zero_crossings(const TraceSignal& sig, double a, double b) {
    if (!(b > a)) throw std::invalid_argument("count_zero_crossings: empty window");
    double max_abs = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < sig.x_samples.size(); ++i) {
        if (sig.x_samples[i] < a || sig.x_samples[i] > b) continue;
        any = true;
        max_abs = std::max(max_abs, std::abs(sig.values[i].real()));
    }
    if (!any) throw std::invalid_argument("count_zero_crossings: window outside x range");
    const double thresh = 1e-3 * max_abs;
    int count = 0;
    int state = 0;
    for (std::size_t i = 0; i < sig.x_samples.size(); ++i) {
        if (sig.x_samples[i] < a || sig.x_samples[i] > b) continue;
        const double v = sig.values[i].real();
        if (std::abs(v) <= thresh) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (state != 0 && s != state) ++count;
        state = s;
    }
    return count;
}

// Peak of the spectral modulus over xi > 0 plus the distance at which the
// modulus falls to half peak.  Works on log-moduli so it also serves the
// eps = 0 spectra that only exist in log form.
inline OscillationReport peak_and_envelope(const Spectrum& spec) {
    const int n = spec.grid.n_samples;
    int ipk = -1;
    for (int i = 0; i < n; ++i) {
        if (spec.grid.node(i) <= 0.0) continue;
        if (spec.values[static_cast<std::size_t>(i)].is_zero()) continue;
        if (ipk < 0 || spec.values[static_cast<std::size_t>(i)].log_mod >
                           spec.values[static_cast<std::size_t>(ipk)].log_mod)
            ipk = i;
    }
    if (ipk < 0) throw std::invalid_argument("peak_and_envelope: spectrum vanishes on xi > 0");

    OscillationReport rep;
    rep.peak_xi = spec.grid.node(ipk);
    rep.peak_log10_mod = spec.values[static_cast<std::size_t>(ipk)].log10_mod();

    const double target = spec.values[static_cast<std::size_t>(ipk)].log_mod - std::log(2.0);
    auto half_cross = [&](int dir) -> double {
        double prev_lm = spec.values[static_cast<std::size_t>(ipk)].log_mod;
        double prev_xi = rep.peak_xi;
        for (int i = ipk + dir; i >= 0 && i < n; i += dir) {
            const double lm = spec.values[static_cast<std::size_t>(i)].log_mod;
            const double xi = spec.grid.node(i);
            if (lm <= target) {
                if (std::isinf(lm))  // fell off a band edge: take the midpoint
                    return std::abs(0.5 * (xi + prev_xi) - rep.peak_xi);
                const double t = (prev_lm - target) / (prev_lm - lm);
                return std::abs(prev_xi + t * (xi - prev_xi) - rep.peak_xi);
            }
            prev_lm = lm;
            prev_xi = xi;
        }
        return -1.0;  // no crossing on this side
    };
    const double right = half_cross(+1);
    const double left = half_cross(-1);
    if (right >= 0.0 && left >= 0.0)
        rep.envelope_halfwidth = 0.5 * (right + left);
    else
        rep.envelope_halfwidth = std::max(right, left);
    return rep;
}

}  // namespace sensilab::spectral
