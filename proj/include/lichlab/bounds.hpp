#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lichlab/common.hpp"
#include "lichlab/model.hpp"
#include "lichlab/nonlinearity.hpp"
#include "lichlab/radial.hpp"

namespace lichlab {

// Elementary bound: t^mu <= alpha + beta / t^nu implies
// t <= (alpha + beta^{mu/(mu+nu)})^{1/mu}.
inline double lemmunu_bound(double alpha, double beta, double mu, double nu) {
    if (!(alpha >= 0) || !(beta >= 0) || !(mu > 0) || !(nu > 0))
        throw config_error("lemmunu_bound: need alpha, beta >= 0 and mu, nu > 0");
    return std::pow(alpha + std::pow(beta, mu / (mu + nu)), 1.0 / mu);
}

// Interior sup bound for subsolutions on B_T: the weighted maximum of
// F = (T^2 - rho^2)^{2/(sigma-1)} u is controlled at its maximum point by
// the displayed coefficient expression, and Omega c B_{T~} converts that
// into a sup bound.  A is the drift-comparison constant of the model.
struct InteriorBound {
    double T = 0.0, T_tilde = 0.0, omega_radius = 0.0;
    double A = 0.0;
    double C = 0.0;  // the bound itself
};

inline InteriorBound interior_sup_bound(const ModelManifold& M, const CoefficientSet& C,
                                        double T, double T_tilde, double omega_radius,
                                        int samples = defaults::grid_n) {
    if (!(0 < T_tilde && T_tilde < T && T <= M.r_max))
        throw config_error("interior_sup_bound: need 0 < T_tilde < T <= R_max");
    if (!(omega_radius < T_tilde))
        throw config_error("interior_sup_bound: Omega must be strictly inside B_{T_tilde}");
    InteriorBound out;
    out.T = T;
    out.T_tilde = T_tilde;
    out.omega_radius = omega_radius;

    // drift comparison constant: Delta rho <= (m-1)(1/rho + A) on (0, T]
    double A = 0.0;
    for (int i = 1; i <= samples; ++i) {
        double rho = T * i / samples;
        A = std::max(A, M.gprime(rho) / M.g(rho) - 1.0 / rho);
    }
    out.A = A;

    const double s = C.sigma, t = C.tau, m = M.m;
    const double q = (s - 1.0) / (s - t);
    double sup = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double rho = T * i / samples;
        double b = C.b(rho);
        if (!(b > 0))
            throw hypothesis_error("interior_sup_bound: b must be positive on the closed ball");
        double w = T * T - rho * rho;
        double inner = (8.0 * (s + 1.0) / ((s - 1.0) * (s - 1.0)) * rho * rho +
                        4.0 / (s - 1.0) * (m + (m - 1.0) * A * rho) * w +
                        positive_part(C.a(rho)) * w * w) /
                           b +
                       std::pow(C.c(rho) / b, q) * w * w;
        sup = std::max(sup, inner);
    }
    out.C = std::pow(sup, 1.0 / (s - 1.0)) *
            std::pow(T * T - T_tilde * T_tilde, -2.0 / (s - 1.0));
    return out;
}

// gamma-superlevel machinery of the scalar upper bound.
struct GammaSets {
    double gamma = 0.0, gamma_star = 1.0;
    double omega_lo = 0.0, omega_hi = 0.0;  // radial extent of {u > gamma*}
    bool omega_empty = true;
    double H_gamma_star = 0.0;  // sup over the superlevel set of (a_+ + c_+)/b
};

struct UstarReport {
    GammaSets gamma_sets;
    double ustar_bound = 0.0;
    double u_max = 0.0;
    bool bound_holds = false;
    // hypothesis predicates
    bool b_positive = false, brmu = false, bvol = false, acb_finite = false;
    std::string failures;
};

inline double ustar_bound_formula(double gamma_star, double H, double sigma) {
    return std::max(gamma_star, std::pow(H, 1.0 / (sigma - 1.0)));
}

// u* <= max{gamma*, H_{gamma*}^{1/(sigma-1)}} for solutions of the
// differential inequality on the superlevel set {u > gamma}.
inline UstarReport upper_bound_ustar(const ModelManifold& M, const CoefficientSet& C,
                                     const RadialFunction& u, double gamma, double mu = 0.0,
                                     int samples = defaults::grid_n) {
    UstarReport rep;
    rep.gamma_sets.gamma = gamma;
    rep.gamma_sets.gamma_star = std::max(1.0, gamma);

    rep.b_positive = true;
    double brmu_inf = infinity;
    double acb_sup = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double r = M.r_max * i / samples;
        double b = C.b(r);
        if (!(b > 0)) rep.b_positive = false;
        if (r >= 0.25 * M.r_max)
            brmu_inf = std::min(brmu_inf, b * std::pow(std::max(r, 1e-30), mu));
        acb_sup = std::max(acb_sup,
                           detail::safe_ratio(positive_part(C.a(r)) + positive_part(C.c(r)), b));
    }
    rep.brmu = rep.b_positive && brmu_inf > 0;
    rep.bvol = volume_growth_check(M, mu, samples).finite;
    rep.acb_finite = is_finite(acb_sup);
    if (!rep.b_positive) rep.failures += "b not positive everywhere; ";
    if (!rep.brmu) rep.failures += "b lacks the r^-mu floor outside a compact; ";
    if (!rep.bvol) rep.failures += "volume growth condition fails; ";
    if (!rep.acb_finite) rep.failures += "sup (a_+ + c_+)/b infinite; ";
    if (!rep.failures.empty()) throw hypothesis_error("upper_bound_ustar: " + rep.failures);

    double gstar = rep.gamma_sets.gamma_star;
    double H = 0.0, lo = infinity, hi = -infinity;
    rep.u_max = u.max_value();
    for (std::size_t i = 0; i < u.r.size(); ++i) {
        if (u.v[i] > gstar) {
            rep.gamma_sets.omega_empty = false;
            lo = std::min(lo, u.r[i]);
            hi = std::max(hi, u.r[i]);
            H = std::max(H, detail::safe_ratio(
                                positive_part(C.a(u.r[i])) + positive_part(C.c(u.r[i])),
                                C.b(u.r[i])));
        }
    }
    if (!rep.gamma_sets.omega_empty) {
        rep.gamma_sets.omega_lo = lo;
        rep.gamma_sets.omega_hi = hi;
    }
    rep.gamma_sets.H_gamma_star = H;
    rep.ustar_bound = ustar_bound_formula(gstar, H, C.sigma);
    rep.bound_holds = rep.u_max <= rep.ustar_bound + 1e-6 * std::max(1.0, rep.ustar_bound);
    return rep;
}

struct BilateralReport {
    RatioBounds ratios;
    double margin_low = 0.0;   // min(u - script K)
    double margin_high = 0.0;  // min(script H - u)
    bool holds = false;
    bool b_positive = false, c_positive = false, brmu_b = false, brmu_c = false, bvol = false;
    std::string failures;
};

// Bilateral pinching script K <= u <= script H.  The lower bound is the
// upper bound applied to v = 1/u with the mirrored coefficient set
// (a, b, c, sigma, tau) -> (-a, c, b, 2-tau, 2-sigma).
inline BilateralReport bilateral_bound_check(const ModelManifold& M, const CoefficientSet& C,
                                             const RadialFunction& u, double mu = 0.0,
                                             int samples = defaults::grid_n) {
    BilateralReport rep;
    rep.ratios = ratio_bounds(C, M, samples);
    rep.b_positive = rep.c_positive = true;
    double binf = infinity, cinf = infinity;
    for (int i = 0; i <= samples; ++i) {
        double r = M.r_max * i / samples;
        if (!(C.b(r) > 0)) rep.b_positive = false;
        if (!(C.c(r) > 0)) rep.c_positive = false;
        if (r >= 0.25 * M.r_max) {
            binf = std::min(binf, C.b(r) * std::pow(std::max(r, 1e-30), mu));
            cinf = std::min(cinf, C.c(r) * std::pow(std::max(r, 1e-30), mu));
        }
    }
    rep.brmu_b = rep.b_positive && binf > 0;
    rep.brmu_c = rep.c_positive && cinf > 0;
    rep.bvol = volume_growth_check(M, mu, samples).finite;
    if (!rep.b_positive) rep.failures += "b not positive; ";
    if (!rep.c_positive) rep.failures += "c not positive; ";
    if (!rep.brmu_b) rep.failures += "b lacks the r^-mu floor; ";
    if (!rep.brmu_c) rep.failures += "c lacks the r^-mu floor; ";
    if (!rep.bvol) rep.failures += "volume growth condition fails; ";
    if (!is_finite(rep.ratios.H)) rep.failures += "H infinite; ";
    if (!is_finite(rep.ratios.K)) rep.failures += "K infinite; ";
    if (!rep.failures.empty()) throw hypothesis_error("bilateral_bound_check: " + rep.failures);

    // upper estimate on u directly
    UstarReport up = upper_bound_ustar(M, C, u, 1.0, mu, samples);
    // lower estimate: literally the same checker on v = 1/u, mirrored set
    RadialField na =
        RadialField::from_callable([&C](double r) { return -C.a(r); }, C.a.closed_form, "-a");
    CoefficientSet mirrored(na, C.c, C.b, 2.0 - C.tau, 2.0 - C.sigma);
    std::vector<double> inv(u.v.size());
    for (std::size_t i = 0; i < u.v.size(); ++i) {
        if (!(u.v[i] > 0)) throw config_error("bilateral_bound_check: u must be positive");
        inv[i] = 1.0 / u.v[i];
    }
    RadialFunction v(u.r, inv);
    UstarReport low = upper_bound_ustar(M, mirrored, v, 1.0, mu, samples);

    rep.margin_high = rep.ratios.script_H - u.max_value();
    rep.margin_low = u.min_value() - rep.ratios.script_K;
    double slack = 1e-6 * std::max(1.0, rep.ratios.script_H);
    rep.holds = up.bound_holds && low.bound_holds && rep.margin_high >= -slack &&
                rep.margin_low >= -slack;
    return rep;
}

// Unique positive root of p(t) = alpha + beta t^{sigma-1} - gamma_c t^{tau-1}
// (strictly increasing on R^+ with p(0+) = -inf, p(inf) = +inf), by
// bracketing bisection and a Newton polish.
inline double constant_solution_root(double alpha, double beta, double gamma_c, double sigma,
                                     double tau) {
    if (!(beta > 0) || !(gamma_c > 0))
        throw config_error("constant_solution_root: need beta, gamma_c > 0");
    if (!(sigma > 1) || !(tau < 1))
        throw config_error("constant_solution_root: need sigma > 1, tau < 1");
    auto p = [&](double t) {
        return alpha + beta * std::pow(t, sigma - 1.0) - gamma_c * std::pow(t, tau - 1.0);
    };
    double lo = 1.0, hi = 1.0;
    while (p(lo) > 0) {
        lo *= 0.5;
        if (lo < 1e-300) throw numerical_error("constant_solution_root: no lower bracket");
    }
    while (p(hi) < 0) {
        hi *= 2.0;
        if (hi > 1e300) throw numerical_error("constant_solution_root: no upper bracket");
    }
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (p(mid) < 0 ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        double dp = (sigma - 1.0) * beta * std::pow(t, sigma - 2.0) +
                    (1.0 - tau) * gamma_c * std::pow(t, tau - 2.0);
        double step = p(t) / dp;
        t -= step;
        if (std::fabs(step) < 1e-12 * std::max(1.0, std::fabs(t))) break;
    }
    return t;
}

}  // namespace lichlab
