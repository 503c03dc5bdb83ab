// Shapiro-Lopatinskii test for constant-coefficient elliptic operators on
// the half-plane x2 > 0.
//
// The pipeline follows the classical recipe: substitute D1 -> -i*xi1 with
// xi1 = +-1 (homogeneity reduces every real xi1 != 0 to the two signs),
// solve the characteristic polynomial in the D2 slot, keep the roots with
// Re(lambda) < 0, and ask whether the boundary operators determine the
// decaying solution basis  x2^q e^{lambda x2}  uniquely.  That is a
// determinant condition on the Lopatinskii matrix; the verdict carries the
// determinants at both signs plus a null vector when the test fails.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sensilab/operator_poly.hpp"

namespace sensilab::opsym {

// Decision thresholds.  The determinant test runs on row-normalized
// matrices so the threshold is scale-free.
inline constexpr double kClusterRadius = 1e-7;   // relative root-merging radius
inline constexpr double kAxisTolerance = 1e-9;   // |Re lambda| below this => undecidable
inline constexpr double kDetThreshold = 1e-8;

struct RootSystem {
    int xi1_sign = +1;
    struct Root {
        std::complex<double> lambda;
        int multiplicity = 1;
    };
    std::vector<Root> roots;
    std::vector<int> decaying;  // indices into roots, Re < 0
    std::vector<int> growing;   // indices into roots, Re > 0
    std::vector<int> on_axis;   // |Re| within kAxisTolerance

    int decaying_count() const {
        int m = 0;
        for (int i : decaying) m += roots[i].multiplicity;
        return m;
    }
    int growing_count() const {
        int m = 0;
        for (int i : growing) m += roots[i].multiplicity;
        return m;
    }
};

// One decaying half-space solution x2^power * e^{lambda x2}.
struct BasisFunction {
    std::complex<double> lambda;
    int power = 0;
};

enum class SLStatus { Satisfied, Violated, NotElliptic, WrongCount };

inline const char* to_string(SLStatus s) {
    switch (s) {
        case SLStatus::Satisfied: return "Satisfied";
        case SLStatus::Violated: return "Violated";
        case SLStatus::NotElliptic: return "NotElliptic";
        case SLStatus::WrongCount: return "WrongCount";
    }
    return "?";
}

struct SLVerdict {
    SLStatus status = SLStatus::NotElliptic;
    std::optional<int> witness_sign;                       // failing xi1 sign
    std::map<int, std::complex<double>> det_values;        // sign -> raw determinant
    std::optional<std::vector<std::complex<double>>> null_vector;
};

// Roots of a univariate complex polynomial (ascending coefficients) via the
// companion matrix; degree stays small here (<= 8) so no balancing games.
inline std::vector<std::complex<double>> polynomial_roots(
    const std::vector<std::complex<double>>& coeffs) {
    int d = static_cast<int>(coeffs.size()) - 1;
    while (d > 0 && std::abs(coeffs[static_cast<std::size_t>(d)]) == 0.0) --d;
    if (d < 1) throw std::invalid_argument("polynomial_roots: degree < 1");
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    const std::complex<double> lead = coeffs[static_cast<std::size_t>(d)];
    for (int r = 1; r < d; ++r) comp(r, r - 1) = 1.0;
    for (int r = 0; r < d; ++r) comp(r, d - 1) = -coeffs[static_cast<std::size_t>(r)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r) out[static_cast<std::size_t>(r)] = es.eigenvalues()(r);
    return out;
}

// Coefficients in lambda of p(-i*xi1, lambda).
inline std::vector<std::complex<double>> lambda_polynomial(const ComplexBivarPoly& p,
                                                           double xi1) {
    int deg2 = 0;
    for (const auto& [jk, c] : p.coeffs) deg2 = std::max(deg2, jk.second);
    std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(deg2) + 1, 0.0);
    const std::complex<double> arg1(0.0, -xi1);
    for (const auto& [jk, c] : p.coeffs) {
        std::complex<double> t = c;
        for (int a = 0; a < jk.first; ++a) t *= arg1;
        coeffs[static_cast<std::size_t>(jk.second)] += t;
    }
    return coeffs;
}

// Ellipticity of a homogeneous symbol: p0(-i xi1, -i xi2) = 0 must have no
// real solution other than the origin.  Checked on the two charts xi1 = 1
// (roots in tau = xi2/xi1) and xi1 = 0.
inline bool is_elliptic(const ComplexBivarPoly& p0) {
    if (p0.is_zero()) return false;
    if (!p0.is_homogeneous())
        throw std::invalid_argument("is_elliptic: polynomial is not homogeneous");
    const int d = p0.total_degree();
    if (d == 0) return true;

    double max_coef = 0.0;
    for (const auto& [jk, c] : p0.coeffs) max_coef = std::max(max_coef, std::abs(c));

    // Chart xi1 = 0: need p0(0, -i) != 0, i.e. the pure-D2 coefficient present.
    if (std::abs(p0.coeff(0, d)) <= 1e-12 * max_coef) return false;

    // Chart xi1 = 1: q(tau) = p0(-i, -i tau) must have no real root.
    std::vector<std::complex<double>> q(static_cast<std::size_t>(d) + 1, 0.0);
    const std::complex<double> mi(0.0, -1.0);
    for (const auto& [jk, c] : p0.coeffs) {
        std::complex<double> t = c;
        for (int a = 0; a < jk.first + jk.second; ++a) t *= mi;
        q[static_cast<std::size_t>(jk.second)] += t;
    }
    for (const auto& tau : polynomial_roots(q)) {
        if (std::abs(tau.imag()) <= kAxisTolerance * std::max(1.0, std::abs(tau))) return false;
    }
    return true;
}

inline RootSystem characteristic_roots(const ComplexBivarPoly& p0, int xi1_sign) {
    if (xi1_sign != 1 && xi1_sign != -1)
        throw std::invalid_argument("characteristic_roots: xi1_sign must be +-1");
    if (p0.is_zero()) throw std::invalid_argument("characteristic_roots: zero polynomial");
    if (!p0.is_homogeneous())
        throw std::invalid_argument("characteristic_roots: polynomial is not homogeneous");

    auto coeffs = lambda_polynomial(p0, static_cast<double>(xi1_sign));
    double max_coef = 0.0;
    for (const auto& c : coeffs) max_coef = std::max(max_coef, std::abs(c));
    if (std::abs(coeffs.back()) <= 1e-12 * max_coef)
        throw std::invalid_argument(
            "characteristic_roots: leading coefficient in the D2 slot vanishes "
            "(degenerate direction)");

    auto raw = polynomial_roots(coeffs);
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    RootSystem rs;
    rs.xi1_sign = xi1_sign;
    // Greedy clustering against the running centroid; double roots split by
    // the eigensolver at the ~1e-8 level get merged back into one root.
    for (const auto& z : raw) {
        if (!rs.roots.empty()) {
            auto& last = rs.roots.back();
            double radius = kClusterRadius * std::max(1.0, std::abs(z));
            if (std::abs(z - last.lambda) <= radius) {
                last.lambda = (last.lambda * static_cast<double>(last.multiplicity) + z) /
                              static_cast<double>(last.multiplicity + 1);
                ++last.multiplicity;
                continue;
            }
        }
        rs.roots.push_back({z, 1});
    }
    for (int i = 0; i < static_cast<int>(rs.roots.size()); ++i) {
        double re = rs.roots[static_cast<std::size_t>(i)].lambda.real();
        double scale = std::max(1.0, std::abs(rs.roots[static_cast<std::size_t>(i)].lambda));
        if (std::abs(re) <= kAxisTolerance * scale)
            rs.on_axis.push_back(i);
        else if (re < 0.0)
            rs.decaying.push_back(i);
        else
            rs.growing.push_back(i);
    }
    return rs;
}

inline std::vector<BasisFunction> decaying_solution_basis(const RootSystem& rs) {
    std::vector<BasisFunction> basis;
    for (int i : rs.decaying) {
        const auto& root = rs.roots[static_cast<std::size_t>(i)];
        for (int q = 0; q < root.multiplicity; ++q) basis.push_back({root.lambda, q});
    }
    return basis;
}

// B applied to x2^q e^{lambda x2}, evaluated at x2 = 0 with D1 -> -i*xi1.
// d^s/dx2^s [x2^q e^{lx2}] at 0 keeps only the t = q Leibniz term:
// binom(s,q) q! l^{s-q}.  Also returns the sum of term magnitudes: the
// natural scale of the entry, which survives when the terms cancel (the
// cancellation IS the SL failure, so it must not be normalized away).
inline std::pair<std::complex<double>, double> boundary_value_with_scale(
    const ComplexBivarPoly& b, int xi1_sign, const BasisFunction& f) {
    auto binom = [](int n, int k) -> double {
        double v = 1.0;
        for (int a = 0; a < k; ++a) v = v * static_cast<double>(n - a) / static_cast<double>(a + 1);
        return v;
    };
    const std::complex<double> arg1(0.0, -static_cast<double>(xi1_sign));
    std::complex<double> total = 0.0;
    double scale = 0.0;
    for (const auto& [jk, c] : b.coeffs) {
        const int r = jk.first, s = jk.second;
        if (s < f.power) continue;
        std::complex<double> t = c;
        for (int a = 0; a < r; ++a) t *= arg1;
        double fact = 1.0;
        for (int a = 2; a <= f.power; ++a) fact *= a;
        t *= binom(s, f.power) * fact;
        for (int a = 0; a < s - f.power; ++a) t *= f.lambda;
        total += t;
        scale += std::abs(t);
    }
    return {total, scale};
}

inline std::complex<double> boundary_value(const ComplexBivarPoly& b, int xi1_sign,
                                           const BasisFunction& f) {
    return boundary_value_with_scale(b, xi1_sign, f).first;
}

inline Eigen::MatrixXcd lopatinskii_matrix(const std::vector<BasisFunction>& basis,
                                           const std::vector<ComplexBivarPoly>& bconds,
                                           int xi1_sign) {
    if (basis.size() != bconds.size())
        throw std::invalid_argument("lopatinskii_matrix: boundary-condition count "
                                    "does not match the decaying basis size");
    const int m = static_cast<int>(basis.size());
    Eigen::MatrixXcd M(m, m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            M(j, k) = boundary_value(bconds[static_cast<std::size_t>(j)], xi1_sign,
                                     basis[static_cast<std::size_t>(k)]);
    return M;
}

namespace detail {

// Rows are normalized by the largest pre-cancellation entry scale, so the
// decision is invariant under scaling any boundary operator while genuine
// cancellations stay at the rounding level.
inline Eigen::MatrixXcd normalized_lopatinskii(const std::vector<BasisFunction>& basis,
                                               const std::vector<ComplexBivarPoly>& bconds,
                                               int xi1_sign) {
    const int m = static_cast<int>(basis.size());
    Eigen::MatrixXcd N(m, m);
    for (int j = 0; j < m; ++j) {
        double row_scale = 0.0;
        for (int k = 0; k < m; ++k) {
            auto [val, scale] = boundary_value_with_scale(bconds[static_cast<std::size_t>(j)],
                                                          xi1_sign,
                                                          basis[static_cast<std::size_t>(k)]);
            N(j, k) = val;
            row_scale = std::max(row_scale, scale);
        }
        if (row_scale > 0.0) N.row(j) /= row_scale;
    }
    return N;
}

}  // namespace detail

// Full SL decision for an operator plus boundary conditions.  Lower-order
// terms are discarded from both before testing (they never matter here);
// both xi1 signs are always checked because failures can be one-sided.
inline SLVerdict check_sl(const ComplexBivarPoly& p,
                          const std::vector<ComplexBivarPoly>& bconds) {
    SLVerdict v;
    if (p.is_zero()) {
        v.status = SLStatus::NotElliptic;
        return v;
    }
    const ComplexBivarPoly p0 = principal_part(p);
    if (!is_elliptic(p0)) {
        v.status = SLStatus::NotElliptic;
        return v;
    }
    std::vector<ComplexBivarPoly> bc0;
    bc0.reserve(bconds.size());
    for (const auto& b : bconds) bc0.push_back(b.is_zero() ? b : principal_part(b));

    bool violated = false;
    for (int sign : {+1, -1}) {
        RootSystem rs = characteristic_roots(p0, sign);
        if (!rs.on_axis.empty()) {
            v.status = SLStatus::NotElliptic;
            return v;
        }
        if (rs.decaying_count() != static_cast<int>(bconds.size())) {
            v.status = SLStatus::WrongCount;
            return v;
        }
        auto basis = decaying_solution_basis(rs);
        Eigen::MatrixXcd M = lopatinskii_matrix(basis, bc0, sign);
        Eigen::MatrixXcd N = detail::normalized_lopatinskii(basis, bc0, sign);
        v.det_values[sign] = M.determinant();
        if (std::abs(N.determinant()) < kDetThreshold) {
            if (!violated || sign == +1) {
                v.witness_sign = sign;
                Eigen::JacobiSVD<Eigen::MatrixXcd> svd(N, Eigen::ComputeFullV);
                Eigen::VectorXcd ker = svd.matrixV().col(N.cols() - 1);
                // scale so the largest entry is exactly 1
                int imax = 0;
                for (int a = 1; a < ker.size(); ++a)
                    if (std::abs(ker(a)) > std::abs(ker(imax))) imax = a;
                ker /= ker(imax);
                v.null_vector = std::vector<std::complex<double>>(ker.data(),
                                                                  ker.data() + ker.size());
            }
            violated = true;
        }
    }
    v.status = violated ? SLStatus::Violated : SLStatus::Satisfied;
    if (!violated) v.witness_sign.reset();
    return v;
}

}  // namespace sensilab::opsym
