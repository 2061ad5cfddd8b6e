#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lichlab/common.hpp"
#include "lichlab/expression.hpp"
#include "lichlab/fd.hpp"
#include "lichlab/model.hpp"
#include "lichlab/radial.hpp"
#include "lichlab/spectral.hpp"

namespace lichlab {

// Coefficient data of Delta u + a u - b u^sigma + c u^tau = 0 with the sign
// restrictions b >= 0, c >= 0 and exponents sigma > 1, tau < 1.
struct CoefficientSet {
    RadialField a, b, c;
    double sigma = 3.0;
    double tau = -1.0;

    CoefficientSet() : a(RadialField::constant(0)), b(RadialField::constant(1)),
                       c(RadialField::constant(1)) {}
    CoefficientSet(RadialField aa, RadialField bb, RadialField cc, double s, double t)
        : a(std::move(aa)), b(std::move(bb)), c(std::move(cc)), sigma(s), tau(t) {
        if (!(sigma > 1.0))
            throw config_error("coefficients: sigma must exceed 1 (superlinear absorption term)");
        if (!(tau < 1.0))
            throw config_error("coefficients: tau must be below 1 (sublinear source term)");
    }

    // Sign restrictions checked on a dense probe of [0, r_probe].
    void validate_signs(double r_probe, int samples = 4096) const {
        for (int i = 0; i <= samples; ++i) {
            double r = r_probe * i / samples;
            if (b(r) < 0)
                throw config_error("coefficients: b must be nonnegative (b(" +
                                   std::to_string(r) + ") < 0)");
            if (c(r) < 0)
                throw config_error("coefficients: c must be nonnegative (c(" +
                                   std::to_string(r) + ") < 0)");
        }
    }
};

// Nonlinearity evaluation f(r, u) = a u - b u^sigma + c u^tau.
inline double f_eval(const CoefficientSet& C, double r, double u) {
    if (C.tau < 0 && !(u > 0))
        throw numerical_error("f_eval: u must be positive when tau < 0 (singular source)");
    return C.a(r) * u - C.b(r) * std::pow(u, C.sigma) + C.c(r) * std::pow(u, C.tau);
}

// d f / d u, needed for iteration shifts.
inline double f_eval_du(const CoefficientSet& C, double r, double u) {
    return C.a(r) - C.sigma * C.b(r) * std::pow(u, C.sigma - 1) +
           C.tau * C.c(r) * std::pow(u, C.tau - 1);
}

// The quotient s -> f(r, s)/s is nonincreasing for every admissible
// coefficient set; checked on a given positive grid.
inline bool quotient_monotone_check(const CoefficientSet& C, double r,
                                    const std::vector<double>& s_grid) {
    double prev = infinity;
    for (double s : s_grid) {
        if (!(s > 0)) throw config_error("quotient_monotone_check: s grid must be positive");
        double q = f_eval(C, r, s) / s;
        if (q > prev + 1e-12 * std::max(1.0, std::fabs(prev))) return false;
        prev = q;
    }
    return true;
}

// Coefficient samples on a grid (coefficients are evaluated once).
struct NodalCoefficients {
    std::vector<double> a, b, c;
    NodalCoefficients(const CoefficientSet& C, const RadialGrid& g) {
        a.resize(g.size());
        b.resize(g.size());
        c.resize(g.size());
        for (int i = 0; i < g.size(); ++i) {
            a[i] = C.a(g.node(i));
            b[i] = C.b(g.node(i));
            c[i] = C.c(g.node(i));
        }
    }
};

// Discrete residual Delta u + f(., u) at the unknown nodes of the operator.
inline std::vector<double> nonlinear_residual(const RadialOperator& op,
                                              const NodalCoefficients& coef,
                                              const CoefficientSet& C,
                                              const std::vector<double>& u) {
    std::vector<double> res(op.grid.size(), 0.0);
    for (int i = op.first_unknown(); i <= op.last_unknown(); ++i) {
        double fu = coef.a[i] * u[i] - coef.b[i] * std::pow(u[i], C.sigma) +
                    coef.c[i] * std::pow(u[i], C.tau);
        res[i] = op.laplacian(u, i) + fu;
    }
    return res;
}

enum class BarrierRole { subsolution, supersolution };

// A sampled function together with its discrete residual certificate.
struct CertifiedFunction {
    RadialFunction fn;
    BarrierRole role = BarrierRole::subsolution;
    std::vector<double> residual;   // at grid nodes (boundary entries zero)
    double worst = 0.0;             // most violating residual for the role
    bool certified = false;

    double operator()(double r) const { return fn(r); }
};

// Residual certificates are judged relative to the local nonlinearity
// magnitude: at barrier values of size 10^k the sign condition cannot be
// meaningfully sharper than roundoff of the competing terms.
inline CertifiedFunction certify(const ModelManifold& M, const CoefficientSet& C,
                                 const RadialOperator& op, std::vector<double> values,
                                 BarrierRole role, double tolerance = tol::barrier) {
    (void)M;
    NodalCoefficients coef(C, op.grid);
    CertifiedFunction out;
    out.role = role;
    out.residual = nonlinear_residual(op, coef, C, values);
    double worst = 0.0;
    bool ok = true;
    for (int i = op.first_unknown(); i <= op.last_unknown(); ++i) {
        double u = values[i];
        double local = 1.0 + std::fabs(coef.a[i]) * std::fabs(u) +
                       coef.b[i] * std::pow(std::fabs(u), C.sigma) +
                       ((u > 0) ? coef.c[i] * std::pow(u, C.tau) : 0.0);
        double scaled = out.residual[i] / local;
        if (role == BarrierRole::subsolution) {
            worst = std::min(worst, scaled);
            ok = ok && scaled >= -tolerance;
        } else {
            worst = std::max(worst, scaled);
            ok = ok && scaled <= tolerance;
        }
    }
    out.worst = worst;
    out.certified = ok;
    out.fn = RadialFunction(op.grid.nodes(), std::move(values));
    return out;
}

struct BarrierPair {
    CertifiedFunction sub, sup;
    double domain_lo = 0.0, domain_hi = 0.0;
};

// Ratio bounds H, K of the bilateral a priori estimate and the derived
// constants script H, script K.
struct RatioBounds {
    double H = infinity;          // sup (a_+ + c)/b
    double K = infinity;          // sup (a_- + b)/c
    double script_H = infinity;   // max{1, H^{1/(sigma-1)}}
    double script_K = 0.0;        // min{1, K^{1/(tau-1)}}
    bool tail_checked = false;    // closed-form coefficients probed past R_max
    bool tail_consistent = true;  // window sups not exceeded on the probed tail
};

namespace detail {

inline double safe_ratio(double num, double den) {
    if (num <= 0) return 0.0;
    if (den <= 0) return infinity;
    return num / den;
}

}  // namespace detail

inline RatioBounds ratio_bounds(const CoefficientSet& C, const ModelManifold& M,
                                int samples = defaults::grid_n) {
    RatioBounds out;
    double H = 0.0, K = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double r = M.r_max * i / samples;
        double a = C.a(r), b = C.b(r), c = C.c(r);
        H = std::max(H, detail::safe_ratio(positive_part(a) + c, b));
        K = std::max(K, detail::safe_ratio(negative_part(a) + b, c));
    }
    out.H = H;
    out.K = K;
    out.script_H = is_finite(H) ? std::max(1.0, std::pow(H, 1.0 / (C.sigma - 1.0))) : infinity;
    out.script_K = is_finite(K) ? std::min(1.0, std::pow(K, 1.0 / (C.tau - 1.0))) : 0.0;
    if (C.a.closed_form && C.b.closed_form && C.c.closed_form) {
        out.tail_checked = true;
        for (double r = M.r_max; r <= 32.0 * M.r_max; r *= 1.25) {
            double a = C.a(r), b = C.b(r), c = C.c(r);
            double h = detail::safe_ratio(positive_part(a) + c, b);
            double k = detail::safe_ratio(negative_part(a) + b, c);
            if (h > H * (1 + 1e-9) + 1e-12 || k > K * (1 + 1e-9) + 1e-12)
                out.tail_consistent = false;
        }
    }
    return out;
}

// Constant barrier pair (script K, script H); residual certificates are
// f(r, script H) <= 0 and f(r, script K) >= 0 at every node.
inline BarrierPair constant_barriers(const CoefficientSet& C, const ModelManifold& M,
                                     int grid_n = defaults::grid_n) {
    RatioBounds rb = ratio_bounds(C, M, grid_n);
    if (!is_finite(rb.H) || !is_finite(rb.K))
        throw hypothesis_error(
            "no constant barriers: H or K infinite; build one with lemma1_supersolution");
    RadialGrid grid(0.0, M.r_max, grid_n);
    RadialOperator op(M, grid, true);
    BarrierPair out;
    out.domain_lo = 0.0;
    out.domain_hi = M.r_max;
    out.sub = certify(M, C, op, std::vector<double>(grid.size(), rb.script_K),
                      BarrierRole::subsolution);
    out.sup = certify(M, C, op, std::vector<double>(grid.size(), rb.script_H),
                      BarrierRole::supersolution);
    if (!out.sub.certified || !out.sup.certified)
        throw numerical_error("constant barriers failed their residual certificates");
    return out;
}

// Zero set of a coefficient on [0, r_max], as the bounding ball/annulus of
// the grid intervals where the field drops below 1e-12 * max.
inline RadialSet zero_set(const RadialField& field, const ModelManifold& M,
                          int samples = defaults::grid_n) {
    double maxv = 0.0;
    std::vector<double> vals(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        vals[i] = field(M.r_max * i / samples);
        maxv = std::max(maxv, vals[i]);
    }
    double cutoff = 1e-12 * maxv;
    int first = -1, last = -1;
    for (int i = 0; i <= samples; ++i)
        if (vals[i] <= cutoff) {
            if (first < 0) first = i;
            last = i;
        }
    if (first < 0) return RadialSet::empty();
    double h = M.r_max / samples;
    double lo = first * h, hi = last * h;
    if (lo <= 2 * h) return RadialSet::ball(hi);
    return RadialSet::annulus(lo, hi);
}

// Smallest U with alpha - beta U^{sigma-1} + delta U^{tau-1} <= 0; the
// left side is strictly decreasing, so bracketing bisection applies.
// Sixty bisections, then a 5% safety inflation against discretization.
inline double smallest_dominating_constant(double alpha, double beta, double deltac,
                                           double sigma, double tau) {
    if (!(beta > 0)) throw hypothesis_error("dominating constant needs inf b > 0 on the shell");
    auto q = [&](double U) {
        return alpha - beta * std::pow(U, sigma - 1.0) + deltac * std::pow(U, tau - 1.0);
    };
    double hi = 1.0;
    while (q(hi) > 0) {
        hi *= 2.0;
        if (hi > 1e150) throw numerical_error("dominating constant: no bracket");
    }
    double lo = hi * 0.5;
    if (q(hi) <= 0 && hi == 1.0) lo = 1e-12;
    while (lo > 1e-300 && q(lo) <= 0) lo *= 0.5;  // ensure q(lo) > 0 if possible
    if (q(lo) <= 0) return hi * 1.05;             // nonpositive all the way down
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (q(mid) <= 0 ? hi : lo) = mid;
    }
    return hi * 1.05;
}

// Supersolution on a ball Omega containing the zero set of b: the blend
// u = gamma (psi u1 + (1 - psi) Lambda0) of the first eigenfunction of
// Delta + a_bar on D and the dominating constant Lambda0, glued by a
// quintic C^2 ramp supported in D \ D'.
struct SupersolutionResult {
    CertifiedFunction v;
    double lambda0 = 0.0, gamma = 0.0, lambda1_D = 0.0;
};

inline SupersolutionResult lemma1_supersolution(const CoefficientSet& C, const ModelManifold& M,
                                                const RadialField& a_bar, double omega_R,
                                                double dprime_R, double d_R,
                                                int grid_n = defaults::grid_n) {
    if (!(omega_R > 0) || omega_R > M.r_max)
        throw config_error("lemma1_supersolution: Omega must fit inside the model window");
    const bool constant_branch = !(dprime_R > 0);
    if (!constant_branch && !(dprime_R < d_R && d_R < omega_R))
        throw config_error("lemma1_supersolution: need D' strictly inside D strictly inside Omega");

    RadialGrid grid(0.0, omega_R, grid_n);
    RadialOperator op(M, grid, true);
    NodalCoefficients coef(C, grid);
    std::vector<double> abar(grid.size());
    for (int i = 0; i < grid.size(); ++i) abar[i] = a_bar(grid.node(i));

    // shell quantities over Omega \ D'
    double alpha = -infinity, beta = infinity, deltac = -infinity;
    for (int i = 0; i <= grid.n; ++i) {
        if (!constant_branch && grid.node(i) < dprime_R) continue;
        alpha = std::max(alpha, abar[i]);
        beta = std::min(beta, coef.b[i]);
        deltac = std::max(deltac, coef.c[i]);
    }
    if (!(beta > 0))
        throw hypothesis_error("lemma1_supersolution: b vanishes on Omega \\ D' (beta = 0)");
    double lambda0 = smallest_dominating_constant(alpha, beta, deltac, C.sigma, C.tau);

    SupersolutionResult out;
    out.lambda0 = lambda0;

    if (constant_branch) {
        out.gamma = 1.0;
        std::vector<double> vals(grid.size(), lambda0);
        CoefficientSet Cbar(a_bar, C.b, C.c, C.sigma, C.tau);
        out.v = certify(M, Cbar, op, std::move(vals), BarrierRole::supersolution);
        if (!out.v.certified)
            throw numerical_error("lemma1_supersolution: constant branch certificate failed");
        return out;
    }

    EigenResult eig = lambda1_ball(M, a_bar, d_R, grid_n);
    if (!(eig.lambda1 > 0))
        throw hypothesis_error("lemma1_supersolution: lambda_1(Delta + a_bar) on D not positive");
    out.lambda1_D = eig.lambda1;

    // quintic C^2 ramp: 1 on D', 0 outside D
    auto ramp = [&](double r) {
        if (r <= dprime_R) return 1.0;
        if (r >= d_R) return 0.0;
        double s = (r - dprime_R) / (d_R - dprime_R);
        return 1.0 - (10.0 * s * s * s - 15.0 * s * s * s * s + 6.0 * s * s * s * s * s);
    };

    // blended profile with gamma = 1
    std::vector<double> blend(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        double r = grid.node(i);
        double psi = ramp(r);
        blend[i] = psi * eig.eigenfunction(r) + (1.0 - psi) * lambda0;
    }

    // Gamma0 from (gamlam): worst case of c (gamma u1)^{tau-1} over D' uses
    // the minimum of u1 there since tau - 1 < 0.
    double min_u1 = infinity, sup_c_dp = 0.0;
    for (int i = 0; i <= grid.n; ++i)
        if (grid.node(i) <= dprime_R) {
            min_u1 = std::min(min_u1, eig.eigenfunction.v[i]);
            sup_c_dp = std::max(sup_c_dp, coef.c[i]);
        }
    double gamma0 = 1.0;
    if (sup_c_dp > 0) {
        auto gamlam = [&](double g) {
            return sup_c_dp * std::pow(g * min_u1, C.tau - 1.0) - eig.lambda1;
        };
        double hi = 1.0;
        while (gamlam(hi) > 0) {
            hi *= 2.0;
            if (hi > 1e150) throw numerical_error("lemma1: Gamma0 bracket failed");
        }
        double lo = hi * 0.5;
        while (lo > 1e-300 && gamlam(lo) <= 0) lo *= 0.5;
        if (gamlam(lo) > 0)
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                (gamlam(mid) <= 0 ? hi : lo) = mid;
            }
        gamma0 = hi * 1.05;
    }

    // C0 bounds (Delta + a_bar) of the blend on D \ D'; epsB and E control
    // the absorption and source there.
    double c0 = -infinity, epsB = infinity, bigE = -infinity;
    for (int i = op.first_unknown(); i <= op.last_unknown(); ++i) {
        double r = grid.node(i);
        if (r < dprime_R || r > d_R) continue;
        c0 = std::max(c0, op.laplacian(blend, i) + abar[i] * blend[i]);
        epsB = std::min(epsB, coef.b[i] * std::pow(blend[i], C.sigma));
        bigE = std::max(bigE, coef.c[i] * std::pow(blend[i], C.tau));
    }
    double gamma1 = 1.0;
    if (c0 > -infinity) {
        if (!(epsB > 0)) throw hypothesis_error("lemma1: b vanishes between D' and D");
        auto clear = [&](double g) {
            return c0 - epsB * std::pow(g, C.sigma - 1.0) + bigE * std::pow(g, C.tau - 1.0);
        };
        double hi = 1.0;
        while (clear(hi) > 0) {
            hi *= 2.0;
            if (hi > 1e150) throw numerical_error("lemma1: Gamma1 bracket failed");
        }
        double lo = hi * 0.5;
        while (lo > 1e-300 && clear(lo) <= 0) lo *= 0.5;
        if (clear(lo) > 0)
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                (clear(mid) <= 0 ? hi : lo) = mid;
            }
        gamma1 = hi * 1.05;
    }

    out.gamma = std::max({1.0, gamma0, gamma1});
    std::vector<double> vals(grid.size());
    for (int i = 0; i < grid.size(); ++i) vals[i] = out.gamma * blend[i];
    CoefficientSet Cbar(a_bar, C.b, C.c, C.sigma, C.tau);
    out.v = certify(M, Cbar, op, std::move(vals), BarrierRole::supersolution);
    if (!out.v.certified)
        throw numerical_error("lemma1_supersolution: residual certificate failed (worst " +
                              std::to_string(out.v.worst) + ")");
    return out;
}

// Property (Sigma): existence of a nonnegative global subsolution on balls
// B_R.  Route (i): spectral negativity of Delta + a - b + Lambda c; route
// (ii): bounded zero set of c with lambda_1(Delta - a) positive, witness by
// inversion of a mirrored supersolution; route (iii): a user-supplied
// positive subsolution.
struct SigmaResult {
    bool holds = false;
    int route = 0;
    CertifiedFunction witness;
    std::string diagnostics;
};

inline SigmaResult sigma_property(const CoefficientSet& C, const ModelManifold& M, double R,
                                  const std::optional<RadialFunction>& user_witness = std::nullopt,
                                  int grid_n = defaults::grid_n) {
    if (!(R > 0) || R > M.r_max) throw config_error("sigma_property: R outside model window");
    std::ostringstream diag;
    RadialGrid grid(0.0, R, grid_n);
    RadialOperator op(M, grid, true);

    // route (i): lambda_1^{Delta + a - b + Lambda c}(M) < 0 for some Lambda
    if (M.warp.closed_form() || M.r_max > 1.1 * R) {
        for (double lam = 1e-2; lam <= 1e4; lam *= 10.0) {
            RadialField pot = RadialField::from_callable(
                [&C, lam](double r) { return C.a(r) - C.b(r) + lam * C.c(r); }, false,
                "a-b+Lambda c");
            SpectralEvidence ev = lambda1_at_infinity(M, pot, grid_n);
            if (!ev.certified_negative) continue;
            // smallest witness radius beyond R with a negative eigenvalue
            std::vector<double> candidates;
            for (double Rw = std::min(1.05 * R, M.r_max); Rw < M.r_max; Rw *= 1.5)
                candidates.push_back(Rw);
            candidates.push_back(M.r_max);
            double r_wit = 0.0;
            for (double Rw : candidates)
                if (lambda1_ball(M, pot, Rw, grid_n).lambda1 < -1e-10) {
                    r_wit = Rw;
                    break;
                }
            if (r_wit == 0.0) continue;
            EigenResult eig = lambda1_ball(M, pot, r_wit, grid_n);
            double sup_psi = 0.0;
            for (int i = 0; i < grid.size(); ++i)
                sup_psi = std::max(sup_psi, eig.eigenfunction(grid.node(i)));
            double mu = std::min(1.0, std::pow(lam, 1.0 / (C.tau - 1.0))) *
                        std::min(1.0, 1.0 / sup_psi);
            std::vector<double> vals(grid.size());
            for (int i = 0; i < grid.size(); ++i) vals[i] = mu * eig.eigenfunction(grid.node(i));
            CertifiedFunction w = certify(M, C, op, std::move(vals), BarrierRole::subsolution);
            if (w.certified) {
                SigmaResult out;
                out.holds = true;
                out.route = 1;
                out.witness = std::move(w);
                out.diagnostics = "route i succeeded with Lambda = " + std::to_string(lam);
                return out;
            }
            diag << "route i: Lambda=" << lam << " witness residual " << w.worst << "; ";
        }
        diag << "route i: no Lambda with certified negative spectrum; ";
    } else {
        diag << "route i: window too short for spectral evidence; ";
    }

    // route (ii): C0 bounded, lambda_1^{Delta - a}(C0) > 0, inversion trick
    {
        RadialSet c0 = zero_set(C.c, M, grid_n);
        bool bounded = true;
        if (c0.kind != RadialSet::Kind::empty && c0.r2 > 0.9 * M.r_max) bounded = false;
        RadialField neg_a =
            RadialField::from_callable([&C](double r) { return -C.a(r); }, C.a.closed_form, "-a");
        double lam_c0 = bounded ? lambda1_bounded_set(M, neg_a, c0, grid_n) : -infinity;
        if (bounded && lam_c0 > 0) {
            // mirrored equation: Delta psi - a psi - c psi^{2-tau} + b psi^{2-sigma} <= 0
            CoefficientSet mirrored(neg_a, C.c, C.b, 2.0 - C.tau, 2.0 - C.sigma);
            double dprime = 0.0, dball = 0.0;
            if (c0.kind != RadialSet::Kind::empty) {
                dprime = std::min(c0.r2 * 1.1 + 4 * grid.h(), 0.8 * R);
                dball = std::min(c0.r2 * 1.25 + 8 * grid.h(), 0.9 * R);
            }
            try {
                SupersolutionResult sup =
                    lemma1_supersolution(mirrored, M, neg_a, R, dprime, dball, grid_n);
                std::vector<double> vals(grid.size());
                for (int i = 0; i < grid.size(); ++i) vals[i] = 1.0 / sup.v.fn.v[i];
                CertifiedFunction w = certify(M, C, op, std::move(vals), BarrierRole::subsolution);
                if (w.certified) {
                    SigmaResult out;
                    out.holds = true;
                    out.route = 2;
                    out.witness = std::move(w);
                    out.diagnostics = "route ii succeeded (inverted mirrored supersolution)";
                    return out;
                }
                diag << "route ii: inverted witness residual " << w.worst << "; ";
            } catch (const std::exception& e) {
                diag << "route ii: " << e.what() << "; ";
            }
        } else {
            diag << "route ii: zero set of c unbounded or not spectrally small; ";
        }
    }

    // route (iii): user-supplied positive subsolution
    if (user_witness) {
        std::vector<double> vals(grid.size());
        for (int i = 0; i < grid.size(); ++i) vals[i] = (*user_witness)(grid.node(i));
        CertifiedFunction w = certify(M, C, op, std::move(vals), BarrierRole::subsolution);
        if (w.certified) {
            SigmaResult out;
            out.holds = true;
            out.route = 3;
            out.witness = std::move(w);
            out.diagnostics = "route iii succeeded (user witness)";
            return out;
        }
        diag << "route iii: user witness residual " << w.worst << "; ";
    } else {
        diag << "route iii: no user witness supplied; ";
    }

    SigmaResult out;
    out.holds = false;
    out.diagnostics = diag.str();
    return out;
}

// Hypothesis predicates of the pasted-subsolution existence theorem.
struct TheoremBHypotheses {
    double lambda1_B0 = 0.0;
    bool hp1 = false;  // lambda_1^{Delta+a}(B_0) > 0
    double ratio_sup = infinity;
    bool hp2 = false;  // sup_{M \ Omega_1} (a_- + b)/c finite
    double lambda1_omega2_neg_a = 0.0;
    bool hp3 = false;  // lambda_1^{Delta-a}(Omega_2) > 0
    bool c0_inside_omega1 = false;
    bool all() const { return hp1 && hp2 && hp3 && c0_inside_omega1; }
};

inline TheoremBHypotheses theoremB_hypotheses(const CoefficientSet& C, const ModelManifold& M,
                                              double R1, double R2,
                                              int grid_n = defaults::grid_n) {
    TheoremBHypotheses out;
    RadialSet b0 = zero_set(C.b, M, grid_n);
    out.lambda1_B0 = lambda1_bounded_set(M, C.a, b0, grid_n);
    out.hp1 = out.lambda1_B0 > 0;
    RadialSet c0 = zero_set(C.c, M, grid_n);
    out.c0_inside_omega1 = (c0.kind == RadialSet::Kind::empty) || (c0.r2 < R1);
    double sup_ratio = 0.0;
    for (int i = 0; i <= grid_n; ++i) {
        double r = R1 + (M.r_max - R1) * i / grid_n;
        sup_ratio = std::max(
            sup_ratio, detail::safe_ratio(negative_part(C.a(r)) + C.b(r), C.c(r)));
    }
    out.ratio_sup = sup_ratio;
    out.hp2 = is_finite(sup_ratio);
    RadialField neg_a =
        RadialField::from_callable([&C](double r) { return -C.a(r); }, C.a.closed_form, "-a");
    out.lambda1_omega2_neg_a = lambda1_ball(M, neg_a, R2, grid_n).lambda1;
    out.hp3 = out.lambda1_omega2_neg_a > 0;
    return out;
}

// Pasted global subsolution u_- = max-glue of an eigenfunction-based
// interior subsolution on Omega_2 and the constant mu_* outside Omega_1,
// with mu_* = min{1, ratio_sup^{1/(tau-1)}, nu/2} and nu the interior
// subsolution's value on the pasting sphere.
struct PastedSubsolution {
    CertifiedFunction u_minus;
    TheoremBHypotheses hypotheses;
    double nu = 0.0, mu_star = 0.0, gamma_used = 0.0;
    std::vector<int> interface_nodes;  // where the active branch switches
};

inline PastedSubsolution theoremB_pasted_subsolution(const CoefficientSet& C,
                                                     const ModelManifold& M, double R1, double R2,
                                                     int grid_n = defaults::grid_n) {
    RadialGrid full(0.0, M.r_max, grid_n);
    if (!(0 < R1 && R1 < R2 - 2 * full.h() && R2 <= M.r_max))
        throw config_error(
            "theoremB_pasted_subsolution: need Omega_1 strictly inside Omega_2 inside the window");
    PastedSubsolution out;
    out.hypotheses = theoremB_hypotheses(C, M, R1, R2, grid_n);
    if (!out.hypotheses.all()) {
        std::ostringstream msg;
        msg << "pasted subsolution hypotheses failed:";
        if (!out.hypotheses.hp1) msg << " lambda_1(B_0) = " << out.hypotheses.lambda1_B0 << " <= 0;";
        if (!out.hypotheses.hp2) msg << " sup (a_- + b)/c infinite outside Omega_1;";
        if (!out.hypotheses.hp3)
            msg << " lambda_1(Delta - a)(Omega_2) = " << out.hypotheses.lambda1_omega2_neg_a
                << " <= 0;";
        if (!out.hypotheses.c0_inside_omega1) msg << " zero set of c not inside Omega_1;";
        throw hypothesis_error(msg.str());
    }

    // interior subsolution: eigenfunction of Delta + a - gamma (b - c) on
    // Omega_2 with negative bottom eigenvalue, scaled per the standard
    // small-mu normalization
    EigenResult eig;
    double gamma_used = 0.0;
    for (double g = 1e-3; g <= 1.0 + 1e-12; g *= 4.0) {
        RadialField pot = RadialField::from_callable(
            [&C, g](double r) { return C.a(r) - g * (C.b(r) - C.c(r)); }, false,
            "a-gamma(b-c)");
        EigenResult cand = lambda1_ball(M, pot, R2, grid_n);
        if (cand.lambda1 < -1e-10) {
            eig = cand;
            gamma_used = g;
            break;
        }
    }
    if (gamma_used == 0.0)
        throw hypothesis_error(
            "pasted subsolution: no gamma makes Delta + a - gamma(b-c) spectrally negative on "
            "Omega_2; interior eigenfunction route unavailable");
    out.gamma_used = gamma_used;

    double sup_psi = eig.eigenfunction.max_value();
    double mu_scale = std::min(std::pow(gamma_used, 1.0 / (C.sigma - 1.0)),
                               std::pow(gamma_used, 1.0 / (C.tau - 1.0))) /
                      sup_psi;
    out.nu = mu_scale * eig.eigenfunction(R1);
    out.mu_star = std::min({1.0, std::pow(out.hypotheses.ratio_sup, 1.0 / (C.tau - 1.0)),
                            0.5 * out.nu});
    if (!(out.mu_star > 0)) throw numerical_error("pasted subsolution: mu_* not positive");

    RadialOperator op(M, full, true);
    std::vector<double> vals(full.size());
    std::vector<int> branch(full.size());
    for (int i = 0; i < full.size(); ++i) {
        double r = full.node(i);
        double u1 = (r <= R2) ? mu_scale * eig.eigenfunction(r) : 0.0;
        if (r <= R1) {
            vals[i] = u1;
            branch[i] = 1;
        } else if (r < R2) {
            vals[i] = std::max(u1, out.mu_star);
            branch[i] = (u1 >= out.mu_star) ? 1 : 2;
        } else {
            vals[i] = out.mu_star;
            branch[i] = 2;
        }
    }
    for (int i = 1; i < full.size(); ++i)
        if (branch[i] != branch[i - 1]) out.interface_nodes.push_back(i);
    out.u_minus = certify(M, C, op, std::move(vals), BarrierRole::subsolution);
    if (!out.u_minus.certified)
        throw numerical_error("pasted subsolution certificate failed (worst " +
                              std::to_string(out.u_minus.worst) + ")");
    return out;
}

}  // namespace lichlab
