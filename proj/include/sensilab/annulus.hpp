// Diagonal realization of the reduced sensitive problem
//
//   (A + eps^2 B) v = F      on the traces over the outer circle,
//
// on the annulus r0 < r < 1, where every operator is closed-form per
// angular mode n:
//
//   harmonic extension   g_n(r) = (r^{|n|} - r0^{2|n|} r^{-|n|}) / (1 - r0^{2|n|})
//   inner normal trace   sigma_R0(n) = g_n'(r0) = 2|n| r0^{|n|-1} / (1 - r0^{2|n|})
//   sigma_A(n) = 2|n| h(n)^2 sigma_R0(n)^2        (A = R0* P* P R0)
//   sigma_B(n) = 2|n|^3                           (B = Q* Q)
//
// All arc-length measure factors are dropped (unit-measure convention);
// they cancel in every ratio this model is used for.  sigma_A decays like
// r0^{2n} -- the smoothing operator at symbol level -- so for small eps the
// solution concentrates at the crossover mode where eps^2 sigma_B catches
// up with sigma_A, and the mode sums blow up as eps -> 0.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "sensilab/layer.hpp"

namespace sensilab::annulus {

enum class ModeForcingKind { Rational, Flat, Gaussian, Zero };

struct ModeForcing {
    ModeForcingKind kind = ModeForcingKind::Rational;
    double sigma = 8.0;

    double eval(int n) const {
        switch (kind) {
            case ModeForcingKind::Rational: return 1.0 / (1.0 + static_cast<double>(n) * n);
            case ModeForcingKind::Flat: return 1.0;
            case ModeForcingKind::Gaussian:
                return std::exp(-static_cast<double>(n) * n / (2.0 * sigma * sigma));
            case ModeForcingKind::Zero: return 0.0;
        }
        return 0.0;
    }
};

struct AnnulusModel {
    double r0 = 0.5;
    double epsilon = 1e-3;
    int n_max = 64;
    ModeForcing forcing = {};
    // Applied to the P factor of sigma_A.  The default passes every mode
    // |n| >= 1 and kills n = 0, where the symbols are not defined.
    layer::CutoffSpec cutoff = {0.25, 0.5};

    void validate() const {
        if (!(r0 > 0.0 && r0 < 1.0))
            throw std::invalid_argument("AnnulusModel: r0 must lie in (0,1)");
        if (!(epsilon > 0.0)) throw std::invalid_argument("AnnulusModel: epsilon must be > 0");
        if (n_max < 1) throw std::invalid_argument("AnnulusModel: n_max must be >= 1");
    }
};

// Radial profile of the harmonic extension of e^{i n theta} from the outer
// circle, vanishing on the inner one.
inline double harmonic_mode_profile(int n, double r0, double r) {
    if (!(r0 > 0.0 && r0 < 1.0)) throw std::invalid_argument("harmonic_mode_profile: bad r0");
    if (r < r0 || r > 1.0)
        throw std::invalid_argument("harmonic_mode_profile: r outside the annulus");
    const int a = std::abs(n);
    if (a == 0) return std::log(r / r0) / std::log(1.0 / r0);
    const double r02n = std::pow(r0, 2 * a);
    return (std::pow(r, a) - r02n * std::pow(r, -a)) / (1.0 - r02n);
}

inline double harmonic_mode_profile_dr(int n, double r0, double r) {
    const int a = std::abs(n);
    if (a == 0) return 1.0 / (r * std::log(1.0 / r0));
    const double r02n = std::pow(r0, 2 * a);
    return (a * std::pow(r, a - 1) + a * r02n * std::pow(r, -a - 1)) / (1.0 - r02n);
}

// Trace of the inward normal derivative on the inner circle.
inline double r0_symbol(int n, double r0) {
    if (!(r0 > 0.0 && r0 < 1.0)) throw std::invalid_argument("r0_symbol: bad r0");
    const int a = std::abs(n);
    if (a == 0) return 1.0 / (r0 * std::log(1.0 / r0));
    const double r02n = std::pow(r0, 2 * a);
    return 2.0 * a * std::pow(r0, a - 1) / (1.0 - r02n);
}

inline double b_symbol(int n) {
    const double a = std::abs(n);
    return 2.0 * a * a * a;
}

inline double a_symbol(int n, const AnnulusModel& model) {
    const double h = model.cutoff.h(static_cast<double>(n));
    if (h == 0.0) return 0.0;  // n = 0 lands here under the default cutoff
    const double s = r0_symbol(n, model.r0);
    return 2.0 * std::abs(n) * h * h * s * s;
}

struct ModeSolution {
    std::map<int, std::complex<double>> v_hat;  // |n| <= n_max, n != 0
    std::map<int, double> sigma_A, sigma_B;
    int crossover_n = 0;
    bool zero_mode_excluded = true;
};

inline int crossover_mode(const AnnulusModel& model) {
    for (int n = 1; n <= model.n_max; ++n) {
        if (model.epsilon * model.epsilon * b_symbol(n) >= a_symbol(n, model)) return n;
    }
    throw std::runtime_error("crossover_mode: no crossover within n_max");
}

inline ModeSolution mode_solve(const AnnulusModel& model) {
    model.validate();
    ModeSolution sol;
    sol.crossover_n = crossover_mode(model);
    if (sol.crossover_n > model.n_max - 10)
        throw std::runtime_error("mode_solve: n_max too small (crossover within 10 modes "
                                 "of the boundary)");
    const double e2 = model.epsilon * model.epsilon;
    for (int n = -model.n_max; n <= model.n_max; ++n) {
        const double sa = a_symbol(n, model);
        const double sb = b_symbol(n);
        if (n == 0) {
            // Both symbols vanish: the mode is excluded and reported, not solved.
            sol.zero_mode_excluded = true;
            continue;
        }
        sol.sigma_A[n] = sa;
        sol.sigma_B[n] = sb;
        sol.v_hat[n] = model.forcing.eval(n) / (sa + e2 * sb);
    }
    return sol;
}

struct SweepRecord {
    double epsilon = 0.0;
    int crossover_n = 0;
    double log10_sup_vhat = 0.0;
    std::array<double, 4> log10_Hm{};  // H^{-m} proxy norms, m = 0..3
};

inline SweepRecord summarize(const AnnulusModel& model, const ModeSolution& sol) {
    SweepRecord rec;
    rec.epsilon = model.epsilon;
    rec.crossover_n = sol.crossover_n;
    double sup = 0.0;
    for (const auto& [n, v] : sol.v_hat) sup = std::max(sup, std::abs(v));
    rec.log10_sup_vhat = std::log10(sup);
    for (int m = 0; m <= 3; ++m) {
        double s = 0.0;
        for (const auto& [n, v] : sol.v_hat)
            s += std::norm(v) * std::pow(1.0 + static_cast<double>(n) * n, -m);
        rec.log10_Hm[static_cast<std::size_t>(m)] = std::log10(s);
    }
    return rec;
}

// eps_list must be strictly positive and sorted descending (the sweep walks
// toward the singular limit).
inline std::vector<SweepRecord> divergence_sweep(AnnulusModel model,
                                                 const std::vector<double>& eps_list) {
    if (eps_list.empty()) throw std::invalid_argument("divergence_sweep: empty epsilon list");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0))
            throw std::invalid_argument("divergence_sweep: epsilon values must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("divergence_sweep: epsilon list must be sorted "
                                        "strictly descending");
    }
    std::vector<SweepRecord> out;
    for (double eps : eps_list) {
        model.epsilon = eps;
        out.push_back(summarize(model, mode_solve(model)));
    }
    return out;
}

// Closed-form estimate of the crossover mode, ln(2/(eps r0)) / ln(1/r0);
// the solved crossover stays within one mode of it.
inline double crossover_estimate(double epsilon, double r0) {
    return std::log(2.0 / (epsilon * r0)) / std::log(1.0 / r0);
}

}  // namespace sensilab::annulus
