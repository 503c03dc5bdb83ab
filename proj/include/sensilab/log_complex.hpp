// Complex values carried as (log-modulus, phase).
//
// The strip and Hadamard spectra contain factors like e^{2|xi|} that leave
// double range near xi ~ 355, so every spectrum in this library is stored
// and combined in log-polar form.  log_mod is the natural logarithm of the
// modulus; -infinity encodes an exact zero.

#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace sensilab {

struct LogComplex {
    double log_mod = -std::numeric_limits<double>::infinity();
    double phase = 0.0;  // radians, kept in (-pi, pi]

    static double wrap_phase(double p) {
        double w = std::remainder(p, 2.0 * M_PI);
        if (w <= -M_PI) w += 2.0 * M_PI;
        return w;
    }

    static LogComplex zero() { return LogComplex{}; }

    static LogComplex from_log(double lm, double ph) {
        return LogComplex{lm, wrap_phase(ph)};
    }

    static LogComplex from(std::complex<double> z) {
        double m = std::abs(z);
        if (m == 0.0) return zero();
        return LogComplex{std::log(m), std::arg(z)};
    }

    // Positive real value given directly as a natural log.
    static LogComplex from_log_positive(double lm) { return LogComplex{lm, 0.0}; }

    bool is_zero() const { return std::isinf(log_mod) && log_mod < 0.0; }

    double modulus() const { return std::exp(log_mod); }
    double log10_mod() const { return log_mod / std::log(10.0); }

    // May overflow to inf; callers that need guaranteed-finite doubles
    // should check log_mod first (see Spectrum::linear).
    std::complex<double> value() const {
        if (is_zero()) return {0.0, 0.0};
        return std::polar(std::exp(log_mod), phase);
    }

    friend LogComplex operator*(const LogComplex& a, const LogComplex& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return from_log(a.log_mod + b.log_mod, a.phase + b.phase);
    }

    friend LogComplex operator/(const LogComplex& a, const LogComplex& b) {
        if (a.is_zero()) return zero();
        return from_log(a.log_mod - b.log_mod, a.phase - b.phase);
    }

    // Sum via the factored form a*(1 + b/a) with |b| <= |a|, so the only
    // exponential ever taken is exp(log|b| - log|a|) <= 1.
    LogComplex plus(const LogComplex& other) const {
        if (is_zero()) return other;
        if (other.is_zero()) return *this;
        const LogComplex& big = (log_mod >= other.log_mod) ? *this : other;
        const LogComplex& small = (log_mod >= other.log_mod) ? other : *this;
        std::complex<double> r =
            std::polar(std::exp(small.log_mod - big.log_mod), small.phase - big.phase);
        std::complex<double> w = 1.0 + r;
        double wm = std::abs(w);
        if (wm == 0.0) return zero();
        return from_log(big.log_mod + std::log(wm), big.phase + std::arg(w));
    }
};

}  // namespace sensilab
