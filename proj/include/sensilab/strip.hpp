// Exact Fourier-domain solution of the strip problem
//
//   Laplace u = 0 on R x (0,1),  u = 0 on y = 0,
//   du/dx + (i + eps^2) du/dy = phi on y = 1,
//
// whose trace transform is  betahat(xi) = phihat(xi) / D(xi)  with
//
//   D(xi) = -i xi (1 - coth xi) + eps^2 xi coth xi.
//
// 1 - coth xi collapses to -2 e^{-2 xi} / (1 - e^{-2 xi}) for xi > 0; that
// identity is the only safe way to evaluate D once xi is large (the naive
// difference underflows to zero and the division blows up).  In the same
// stable variables,
//
//   D(xi) = |xi| [ eps^2 (1+q) + 2i * (q  for xi > 0 | 1  for xi < 0) ] / (1-q),
//   q = e^{-2|xi|},
//
// which exposes the one-sided transparency: the exponentially small
// denominator, hence the exponentially large trace, lives on xi > 0 only.
// The sup of |betahat| sits where the two denominator terms balance,
// 2 e^{-2 xi} = eps^2, i.e. xi* = ln(sqrt(2)/eps).
//
// Also here: the Hadamard field psi(xi) cosh(xi y) of the Cauchy problem,
// and the truncated-cosh sequence whose inverse transforms illustrate the
// escape from distribution space.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sensilab/log_complex.hpp"
#include "sensilab/spectral.hpp"

namespace sensilab::strip {

enum class ForcingKind { BandFlat, Rational, Gaussian };

struct ForcingSpectrum {
    ForcingKind kind = ForcingKind::BandFlat;
    double band_lo = 0.0, band_hi = 0.0;  // BandFlat support on lo <= |xi| <= hi
    double sigma = 1.0;                   // Gaussian width

    static ForcingSpectrum band_flat(double lo, double hi) {
        if (!(hi > lo) || lo < 0.0)
            throw std::invalid_argument("ForcingSpectrum: need 0 <= band_lo < band_hi");
        return {ForcingKind::BandFlat, lo, hi, 1.0};
    }
    static ForcingSpectrum rational() { return {ForcingKind::Rational, 0, 0, 1.0}; }
    static ForcingSpectrum gaussian(double sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("ForcingSpectrum: sigma must be > 0");
        return {ForcingKind::Gaussian, 0, 0, sigma};
    }

    LogComplex eval(double xi) const {
        switch (kind) {
            case ForcingKind::BandFlat:
                return (std::abs(xi) >= band_lo && std::abs(xi) <= band_hi)
                           ? LogComplex::from_log_positive(0.0)
                           : LogComplex::zero();
            case ForcingKind::Rational:
                return LogComplex::from_log_positive(-std::log1p(xi * xi));
            case ForcingKind::Gaussian:
                return LogComplex::from_log_positive(-xi * xi / (2.0 * sigma * sigma));
        }
        return LogComplex::zero();
    }
};

struct StripProblem {
    double epsilon;
    ForcingSpectrum phi_hat;
    spectral::FreqGrid grid;
};

// Trace spectrum betahat on a grid, log-polar samples.
struct TraceSpectrum {
    spectral::Spectrum spectrum;
    double epsilon;
};

inline LogComplex strip_denominator(double epsilon, double xi) {
    if (epsilon < 0.0) throw std::invalid_argument("strip_denominator: epsilon must be >= 0");
    if (xi == 0.0) {
        // xi -> 0 limit of -i xi + (i + eps^2) xi coth(xi) is i + eps^2,
        // but the eps = 0 problem is the singular configuration: refuse.
        if (epsilon == 0.0)
            throw std::domain_error("strip_denominator: xi = 0 is singular for epsilon = 0");
        return LogComplex::from(std::complex<double>(epsilon * epsilon, 1.0));
    }
    const double s = std::abs(xi);
    const double log_q = -2.0 * s;
    const double q = std::exp(log_q);
    LogComplex sum = LogComplex::zero();
    if (epsilon > 0.0)
        sum = LogComplex::from_log(2.0 * std::log(epsilon) + std::log1p(q), 0.0);
    const double log_osc = (xi > 0.0) ? std::log(2.0) + log_q : std::log(2.0);
    sum = sum.plus(LogComplex::from_log(log_osc, M_PI / 2.0));
    const double log_one_minus_q = std::log(-std::expm1(log_q));
    return LogComplex::from_log(sum.log_mod + std::log(s) - log_one_minus_q, sum.phase);
}

inline LogComplex beta_hat(const StripProblem& p, double xi) {
    LogComplex phi = p.phi_hat.eval(xi);
    if (!std::isfinite(phi.phase) || std::isnan(phi.log_mod))
        throw std::invalid_argument("beta_hat: non-finite forcing value");
    if (phi.is_zero()) return LogComplex::zero();
    return phi / strip_denominator(p.epsilon, xi);
}

inline TraceSpectrum trace_spectrum(const StripProblem& p) {
    std::vector<LogComplex> vals(static_cast<std::size_t>(p.grid.n_samples));
    for (int i = 0; i < p.grid.n_samples; ++i)
        vals[static_cast<std::size_t>(i)] = beta_hat(p, p.grid.node(i));
    return {spectral::Spectrum(p.grid, std::move(vals)), p.epsilon};
}

// log of sinh(z)/cosh(z) for z >= 0, exact to the last exponential.
inline double log_sinh(double z) {
    return z + std::log1p(-std::exp(-2.0 * z)) - std::log(2.0);  // -inf at z = 0
}
inline double log_cosh(double z) {
    return std::abs(z) + std::log1p(std::exp(-2.0 * std::abs(z))) - std::log(2.0);
}

// uhat(xi, y) = betahat(xi) sinh(xi y)/sinh(xi); the ratio is even in xi.
inline LogComplex u_hat_field(const StripProblem& p, double xi, double y) {
    if (y < 0.0 || y > 1.0) throw std::invalid_argument("u_hat_field: y must lie in [0,1]");
    LogComplex b = beta_hat(p, xi);
    if (y == 1.0 || b.is_zero()) return y == 1.0 ? b : LogComplex::zero();
    if (y == 0.0) return LogComplex::zero();
    const double s = std::abs(xi);
    return LogComplex::from_log(b.log_mod + log_sinh(s * y) - log_sinh(s), b.phase);
}

// Solves 2 e^{-2 xi} = eps^2.  Meaningful for eps << 1; defined up to
// eps = sqrt(2) where it hits zero.
inline double predicted_peak(double epsilon) {
    if (!(epsilon > 0.0) || epsilon > std::sqrt(2.0))
        throw std::domain_error("predicted_peak: epsilon out of range (0, sqrt(2)]");
    return std::log(std::sqrt(2.0) / epsilon);
}

// Default discretization: the peak must sit well inside the grid.
inline spectral::FreqGrid default_grid(double epsilon) {
    return spectral::FreqGrid(4.0 + 2.0 * predicted_peak(epsilon), 1 << 14);
}

inline StripProblem make_problem(double epsilon, ForcingKind kind) {
    spectral::FreqGrid g = default_grid(epsilon);
    ForcingSpectrum f;
    switch (kind) {
        case ForcingKind::BandFlat: f = ForcingSpectrum::band_flat(0.5, g.xi_max); break;
        case ForcingKind::Rational: f = ForcingSpectrum::rational(); break;
        case ForcingKind::Gaussian: f = ForcingSpectrum::gaussian(3.0); break;
    }
    return {epsilon, f, g};
}

struct TraceDiagnostics {
    double epsilon = 0.0;
    double peak_xi = 0.0;
    double compensated_amp = 0.0;  // sqrt(2) eps^2 xi* |betahat(xi*)| / phihat(xi*)
    int zero_crossings = -1;       // -1 when no trace was synthesized
    double log10_max_amp = 0.0;
};

// Peak diagnostics for one epsilon.  When nx > 0 the trace u(x,1) is
// synthesized on [win_a, win_b] and the crossing count and max amplitude
// are recorded as well.
inline TraceDiagnostics trace_asymptotics_point(const StripProblem& p, double win_a = -6.0,
                                                double win_b = 6.0, int nx = 0) {
    TraceDiagnostics d;
    d.epsilon = p.epsilon;
    TraceSpectrum ts = trace_spectrum(p);
    auto rep = spectral::peak_and_envelope(ts.spectrum);
    d.peak_xi = rep.peak_xi;
    if (d.peak_xi > p.grid.xi_max - 2.0 * p.grid.spacing())
        throw std::runtime_error("trace_asymptotics: spectral peak hit the grid boundary");

    const double xs = predicted_peak(p.epsilon);
    LogComplex b = beta_hat(p, xs);
    LogComplex phi = p.phi_hat.eval(xs);
    if (phi.is_zero())
        throw std::invalid_argument("trace_asymptotics: forcing vanishes at the predicted peak");
    d.compensated_amp = std::exp(0.5 * std::log(2.0) + 2.0 * std::log(p.epsilon) +
                                 std::log(xs) + b.log_mod - phi.log_mod);

    if (nx > 0) {
        auto sig = spectral::inverse_transform(ts.spectrum, win_a, win_b, nx, "strip trace y=1");
        d.zero_crossings = spectral::count_zero_crossings(sig, win_a, win_b);
        double mx = 0.0;
        for (const auto& v : sig.values) mx = std::max(mx, std::abs(v));
        d.log10_max_amp = std::log10(mx);
    }
    return d;
}

struct SweepResult {
    std::vector<TraceDiagnostics> points;
    double slope_fit = 0.0;  // peak_xi regressed on ln(1/eps)
};

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("fit_slope: need at least two points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

inline SweepResult trace_asymptotics(const std::vector<double>& eps_list, ForcingKind kind,
                                     double win_a = -6.0, double win_b = 6.0, int nx = 0) {
    if (eps_list.empty()) throw std::invalid_argument("trace_asymptotics: empty epsilon list");
    SweepResult res;
    std::vector<double> L, P;
    for (double eps : eps_list) {
        if (!(eps > 0.0))
            throw std::invalid_argument("trace_asymptotics: epsilon values must be positive");
        auto d = trace_asymptotics_point(make_problem(eps, kind), win_a, win_b, nx);
        L.push_back(std::log(1.0 / eps));
        P.push_back(d.peak_xi);
        res.points.push_back(d);
    }
    res.slope_fit = (eps_list.size() >= 2) ? fit_slope(L, P)
                                           : std::numeric_limits<double>::quiet_NaN();
    return res;
}

// ---- Hadamard Cauchy demo: vhat(xi, y) = psihat(xi) cosh(xi y) ----

inline LogComplex hadamard_field(const ForcingSpectrum& psi_hat, double xi, double y) {
    if (y < 0.0) throw std::invalid_argument("hadamard_field: y must be >= 0");
    LogComplex p = psi_hat.eval(xi);
    if (p.is_zero()) return p;
    return LogComplex::from_log(p.log_mod + log_cosh(xi * y), p.phase);
}

// Grid-level temperedness check: |psihat(xi)| e^{|xi| y} stays bounded
// exactly when the field maximum is attained in the interior rather than
// at the grid boundary.
inline bool hadamard_tempered(const ForcingSpectrum& psi_hat, double y,
                              const spectral::FreqGrid& grid) {
    double best = -std::numeric_limits<double>::infinity();
    double best_xi = 0.0;
    for (int i = 0; i < grid.n_samples; ++i) {
        const double xi = grid.node(i);
        LogComplex v = hadamard_field(psi_hat, xi, y);
        if (v.log_mod > best) { best = v.log_mod; best_xi = xi; }
    }
    return std::abs(best_xi) < 0.9 * grid.xi_max;
}

// ln of the L2 norm of the lambda-truncated field at height y (Parseval:
// equals the x-space norm of the synthesized field).  Log-sum-exp keeps the
// e^{2 lambda} factors tame.
inline double hadamard_truncated_log_norm(const ForcingSpectrum& psi_hat, double y,
                                          double lambda, int n = 4096) {
    spectral::FreqGrid g(lambda, n % 2 == 0 ? n : n + 1);
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> lm2(static_cast<std::size_t>(g.n_samples));
    for (int i = 0; i < g.n_samples; ++i) {
        LogComplex v = hadamard_field(psi_hat, g.node(i), y);
        lm2[static_cast<std::size_t>(i)] = 2.0 * v.log_mod;
        mx = std::max(mx, lm2[static_cast<std::size_t>(i)]);
    }
    if (std::isinf(mx)) return mx;
    double s = 0.0;
    for (int i = 0; i < g.n_samples; ++i) {
        const double w = (i == 0 || i == g.n_samples - 1) ? 0.5 : 1.0;
        s += w * std::exp(lm2[static_cast<std::size_t>(i)] - mx);
    }
    return 0.5 * (mx + std::log(s * g.spacing() / (2.0 * M_PI)));
}

struct HadamardSweep {
    std::vector<double> lambdas;
    std::vector<double> log_norms;
    double slope = 0.0;
};

inline HadamardSweep hadamard_norm_sweep(const ForcingSpectrum& psi_hat, double y,
                                         const std::vector<double>& lambdas, int n = 4096) {
    HadamardSweep sw;
    sw.lambdas = lambdas;
    for (double l : lambdas)
        sw.log_norms.push_back(hadamard_truncated_log_norm(psi_hat, y, l, n));
    sw.slope = (lambdas.size() >= 2) ? fit_slope(sw.lambdas, sw.log_norms)
                                     : std::numeric_limits<double>::quiet_NaN();
    return sw;
}

// ---- Truncated-cosh sequence (inverse transforms of cosh 1_{|xi|<lambda}) ----

struct CoshSequenceValue {
    std::complex<double> exact;  // closed-form antiderivative of the inversion integral
    double paper_approx;         // (e^lambda / 2pi) (cos(lambda x) + x sin(lambda x)) / (1+x^2)
};

inline CoshSequenceValue cosh_sequence(double lambda, double x) {
    if (!(lambda > 0.0)) throw std::domain_error("cosh_sequence: lambda must be > 0");
    if (lambda > 700.0)
        throw std::domain_error("cosh_sequence: lambda > 700 overflows doubles; "
                                "use the log-space spectrum instead");
    const std::complex<double> a(1.0, x), b(1.0, -x);
    CoshSequenceValue v;
    v.exact = (std::sinh(a * lambda) / a + std::sinh(b * lambda) / b) / (2.0 * M_PI);
    v.paper_approx = std::exp(lambda) / (2.0 * M_PI) *
                     (std::cos(lambda * x) + x * std::sin(lambda * x)) / (1.0 + x * x);
    return v;
}

// Spectrum of the truncated cosh on [-lambda, lambda], for the quadrature leg.
inline spectral::Spectrum cosh_demo_spectrum(double lambda, int n) {
    spectral::FreqGrid g(lambda, n);
    std::vector<LogComplex> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        vals[static_cast<std::size_t>(i)] = LogComplex::from_log_positive(log_cosh(g.node(i)));
    return spectral::Spectrum(g, std::move(vals));
}

}  // namespace sensilab::strip
