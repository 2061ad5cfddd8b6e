#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lichlab/common.hpp"
#include "lichlab/fd.hpp"
#include "lichlab/model.hpp"
#include "lichlab/ode.hpp"
#include "lichlab/radial.hpp"

namespace lichlab {

// Threshold potential kappa(t) = 1 + (1/4t^2)(1 + 1/log^2 t), t > 1.
// kappa - 1 is exposed separately: it is the coefficient the barrier ODE
// actually uses and the well-conditioned primitive near t -> infinity.
struct KappaPotential {
    static double kappa(double t) { return 1.0 + kappa_minus_one(t); }
    static double kappa_minus_one(double t) {
        double lt = std::log(t);
        return (1.0 + 1.0 / (lt * lt)) / (4.0 * t * t);
    }
    // critical curve relative to w^2, w = sqrt(t) log t
    static double chi_w2(double t) {
        double lt = std::log(t);
        return 0.25 / (t * t * lt * lt);
    }
};

enum class BetaKind { kappa_threshold, constant_lambda, euler_reference, super_euler_control };

struct OscillationReport {
    double t_start = 0.0, t_end = 0.0;
    int zero_count = 0;
    std::vector<double> zeros;
    std::vector<double> trace_t, trace_beta, trace_dbeta;
    std::vector<double> ratio_t, ratio_values;  // beta / (sqrt(t log t) loglog t), last decade
    double ratio_drift = 0.0;                   // relative variation over the sampled decade
    double constraint_be_bed = 0.0;             // min over the window of (beta - dbeta)
};

namespace detail {

inline double beta_potential(BetaKind kind, double lambda, double eps, double t) {
    switch (kind) {
        case BetaKind::kappa_threshold: return KappaPotential::kappa_minus_one(t);
        case BetaKind::constant_lambda: return lambda - 1.0;  // beta'' = (1-lambda) beta
        case BetaKind::euler_reference: return 0.25 / (t * t);
        case BetaKind::super_euler_control: {
            double lt = std::log(t);
            return (1.0 + eps) / (4.0 * t * t) + 0.25 / (t * t * lt * lt);
        }
    }
    return 0.0;
}

}  // namespace detail

// Integrate beta'' + q(t) beta = 0 on [T, T_end] with dense zero counting and
// the (beta - dbeta) certificate.  Initial data defaults to beta = dbeta at T
// (the z'(R) = 0 normalization of the rho-substitution).
inline OscillationReport integrate_beta(BetaKind kind, double T, double T_end, double beta0 = 1.0,
                                        double dbeta0 = 1.0, double lambda = 1.0,
                                        double eps = 0.5) {
    const double e = std::exp(1.0);
    if ((kind == BetaKind::kappa_threshold || kind == BetaKind::super_euler_control) && !(T >= e))
        throw config_error("integrate_beta: need T >= e for the logarithmic potentials");
    if (kind == BetaKind::euler_reference && !(T > 0))
        throw config_error("integrate_beta: need T > 0");
    if (!(T_end > T)) throw config_error("integrate_beta: need T_end > T");
    if (kind == BetaKind::constant_lambda && !(lambda <= 1.0))
        throw config_error("integrate_beta: constant mode needs lambda <= 1");

    OscillationReport rep;
    rep.t_start = T;
    rep.t_end = T_end;
    OdeDP45 ode(
        [kind, lambda, eps](double t, const std::vector<double>& y, std::vector<double>& dy) {
            dy[0] = y[1];
            dy[1] = -detail::beta_potential(kind, lambda, eps, t) * y[0];
        },
        1e-11, 1e-13);
    ZeroCounter zeros;
    zeros.comp = 0;
    double min_bebed = beta0 - dbeta0;
    const double decade_start = std::max(T, T_end / 10.0);
    ode.integrate(T, {beta0, dbeta0}, T_end, [&](const OdeDP45::Step& s) {
        zeros.observe(s);
        // be-bed certificate on subsamples of the step
        for (int j = 0; j <= 4; ++j) {
            double t = s.t0 + (s.t1 - s.t0) * j / 4.0;
            double b = OdeDP45::dense_eval(s, 0, t);
            double db = OdeDP45::dense_eval(s, 1, t);
            min_bebed = std::min(min_bebed, b - db);
            if (t >= decade_start && j == 0) {
                double lt = std::log(t);
                if (lt > 1.0 && std::log(lt) > 0.0) {
                    rep.ratio_t.push_back(t);
                    rep.ratio_values.push_back(b / (std::sqrt(t * lt) * std::log(lt)));
                }
            }
        }
        rep.trace_t.push_back(s.t1);
        rep.trace_beta.push_back(s.y1[0]);
        rep.trace_dbeta.push_back(s.y1[1]);
    });
    rep.zero_count = zeros.count;
    rep.zeros = zeros.zeros;
    rep.constraint_be_bed = min_bebed;
    if (rep.ratio_values.size() >= 2) {
        double lo = rep.ratio_values[0], hi = rep.ratio_values[0];
        for (double v : rep.ratio_values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        rep.ratio_drift = (hi - lo) / std::max(1e-300, std::fabs(hi));
    }
    return rep;
}

struct RhoSubstitutionReport {
    bool z_prime_nonpositive = false;
    double max_z_prime = 0.0;
    double consistency_rel_error = 0.0;  // t-form vs rho-form after the change of variables
    bool sanity_mode = false;            // potential replaced by zero: z must stay constant
};

// The change of variables t = log(sqrt(n-2) rho^{(n-2)/2}) turns the beta
// equation into (rho^{n-1} z')' + kappa(t(rho)) ((n-2)^2 / 4 rho^2)
// rho^{n-1} z = 0 with z = e^{-t} beta; z'(R) = 0 and a sign integration
// give z' <= 0, equivalently beta - dbeta >= 0.  sanity_zero_potential
// drops the potential entirely; then z stays at 1.
inline RhoSubstitutionReport rho_substitution_check(int n, double R, double rho_end,
                                                    bool sanity_zero_potential = false) {
    if (n < 3) throw config_error("rho_substitution_check: need n >= 3");
    if (!(0 < R && R < rho_end)) throw config_error("rho_substitution_check: need 0 < R < rho_end");
    auto t_of_rho = [n](double rho) {
        return std::log(std::sqrt(static_cast<double>(n - 2)) *
                        std::pow(rho, 0.5 * (n - 2)));
    };
    const double T = t_of_rho(R);
    const double e = std::exp(1.0);
    if (!sanity_zero_potential && !(T > e))
        throw config_error("rho_substitution_check: need t(R) > e (enlarge R)");

    RhoSubstitutionReport rep;
    rep.sanity_mode = sanity_zero_potential;
    // rho-form: y0 = z, y1 = rho^{n-1} z'
    OdeDP45 rho_ode(
        [n, sanity_zero_potential, t_of_rho](double rho, const std::vector<double>& y,
                                             std::vector<double>& dy) {
            dy[0] = y[1] / std::pow(rho, n - 1);
            double pot = sanity_zero_potential
                             ? 0.0
                             : KappaPotential::kappa(t_of_rho(rho)) * (n - 2.0) * (n - 2.0) /
                                   (4.0 * rho * rho);
            dy[1] = -pot * std::pow(rho, n - 1) * y[0];
        },
        1e-11, 1e-13);
    double max_zp = -infinity;
    std::vector<OdeDP45::Step> steps;
    rho_ode.integrate(R, {1.0, 0.0}, rho_end, [&](const OdeDP45::Step& s) {
        for (int j = 1; j <= 4; ++j) {
            double rho = s.t0 + (s.t1 - s.t0) * j / 4.0;
            double zp = OdeDP45::dense_eval(s, 1, rho) / std::pow(rho, n - 1);
            max_zp = std::max(max_zp, zp);
        }
        steps.push_back(s);
    });
    rep.max_z_prime = max_zp;
    rep.z_prime_nonpositive = max_zp <= 1e-10;

    if (sanity_zero_potential) {
        // z must remain identically 1
        double worst = 0.0;
        for (const auto& s : steps) worst = std::max(worst, std::fabs(s.y1[0] - 1.0));
        rep.consistency_rel_error = worst;
        return rep;
    }

    // t-form solution with matching initial data: z(R) = 1, z'(R) = 0
    // translate to beta(T) = e^T, dbeta(T) = e^T
    double scale = std::exp(T);
    std::vector<OdeDP45::Step> beta_steps;
    OdeDP45 beta_ode(
        [](double t, const std::vector<double>& y, std::vector<double>& dy) {
            dy[0] = y[1];
            dy[1] = -KappaPotential::kappa_minus_one(t) * y[0];
        },
        1e-12, 1e-14);
    beta_ode.integrate(T, {scale, scale}, t_of_rho(rho_end) * (1 + 1e-12),
                       [&beta_steps](const OdeDP45::Step& s) { beta_steps.push_back(s); });
    // compare e^{-t} beta(t) with z at the accepted rho-steps (dense output)
    double worst = 0.0;
    std::size_t bi = 0;
    for (const auto& s : steps) {
        double t = t_of_rho(s.t1);
        while (bi + 1 < beta_steps.size() && beta_steps[bi].t1 < t) ++bi;
        double bt = OdeDP45::dense_eval(beta_steps[bi], 0, std::min(t, beta_steps[bi].t1));
        double z_from_beta = std::exp(-t) * bt;
        worst = std::max(worst, std::fabs(z_from_beta - s.y1[0]) /
                                    std::max(1e-300, std::fabs(s.y1[0])));
    }
    rep.consistency_rel_error = worst;
    return rep;
}

struct HilleNehariSample {
    double t = 0.0;
    double value = 0.0;  // t * int_t^inf h(s) ds
    double lower = 0.25;
    double upper = 0.0;  // 1/4 + 1/(4 log t)
    bool strictly_enclosed = false;
};

namespace detail {

// int_0^inf e^{-y} / (log t + y)^2 dy by composite Simpson with an
// exponentially negligible truncation.
inline double hn_correction(double t) {
    const double lt = std::log(t);
    const double Y = 60.0;
    const int n = 6000;
    double h = Y / n;
    double sum = 0.0;
    auto f = [lt](double y) { return std::exp(-y) / ((lt + y) * (lt + y)); };
    for (int i = 0; i < n; i += 2)
        sum += f(i * h) + 4.0 * f((i + 1) * h) + f((i + 2) * h);
    return 0.25 * sum * h / 3.0;
}

}  // namespace detail

// Samples of t int_t^inf h with h(t) = (1/4t^2)(1 + 1/log^2 t): the
// principal part is exactly 1/4 and the correction keeps the value strictly
// inside (1/4, 1/4 + 1/(4 log t)) — the classical non-oscillation criterion
// just fails, matching the threshold character of kappa.
inline std::vector<HilleNehariSample> hille_nehari_probe(double t_lo, double t_hi,
                                                         int samples = 100) {
    if (!(t_lo > std::exp(1.0))) throw config_error("hille_nehari_probe: need t > e");
    if (!(t_hi > t_lo)) throw config_error("hille_nehari_probe: need t_hi > t_lo");
    std::vector<HilleNehariSample> out;
    for (int i = 0; i < samples; ++i) {
        double t = t_lo * std::pow(t_hi / t_lo, samples == 1 ? 0.0 : double(i) / (samples - 1));
        HilleNehariSample s;
        s.t = t;
        s.value = 0.25 + detail::hn_correction(t);
        s.upper = 0.25 + 0.25 / std::log(t);
        s.strictly_enclosed = (s.value > s.lower) && (s.value < s.upper);
        out.push_back(s);
    }
    return out;
}

// Pure-Euler boundary value of the probe: t int_t^inf ds/(4 s^2) = 1/4.
inline double hille_nehari_euler_value() { return 0.25; }

struct CriticalCurveReport {
    double max_rel_diff = 0.0;
    bool exact_to_roundoff = false;
};

// kappa(t) - 1 - 1/(4t^2) = chi_{w^2}(t) at log-spaced points.  The left
// side goes through the kappa-minus-one primitive (a product form, never
// 1 + tiny) and extended precision, so the remaining cancellation against
// 1/(4t^2) stays far below the 1e-14 comparison threshold.
inline CriticalCurveReport critical_curve_identity(int points = 1000) {
    CriticalCurveReport rep;
    const long double e = expl(1.0L);
    for (int i = 0; i <= points; ++i) {
        long double t = e * powl(e, 9.0L * i / points);  // t in (e, e^10]
        long double lt = logl(t);
        long double kappa_excess = (1.0L + 1.0L / (lt * lt)) / (4.0L * t * t);  // kappa - 1
        long double lhs = kappa_excess - 1.0L / (4.0L * t * t);
        long double rhs = 0.25L / (t * t * lt * lt);
        long double rel = fabsl(lhs - rhs) / rhs;
        rep.max_rel_diff = std::max(rep.max_rel_diff, static_cast<double>(rel));
    }
    rep.exact_to_roundoff = rep.max_rel_diff <= 1e-14;
    return rep;
}

enum class BarrierMode { kappa_threshold, constant_lambda };

// Barrier envelope u = sqrt(G) beta(t(r)) with the threshold (or constant)
// potential; carries the discrete certificate Delta u + a u <= tol on the
// window {t(r) >= T}.
struct BarrierEnvelope {
    RadialFunction u;
    RadialFunction a_field;
    RadialFunction phi;                // asymptotic envelope (kappa mode)
    std::vector<double> residual;      // at certified nodes
    std::vector<double> certified_r;   // the nodes carrying the certificate
    double worst_residual = -infinity;  // signed max of Delta u + a u
    bool certified = false;
    double T = 0.0;
};

// phi = sqrt(G) sqrt(t log t) loglog t with t = -log sqrt(G); defined where
// t > e.
inline RadialFunction phi_envelope(const RadialFunction& G) {
    const double e = std::exp(1.0);
    std::vector<double> r, v;
    for (std::size_t i = 0; i < G.r.size(); ++i) {
        double t = -std::log(std::sqrt(G.v[i]));
        if (t <= e) continue;
        double lt = std::log(t);
        r.push_back(G.r[i]);
        v.push_back(std::sqrt(G.v[i]) * std::sqrt(t * lt) * std::log(lt));
    }
    if (r.size() < 8)
        throw config_error("phi_envelope: window too small (-log sqrt(G) <= e almost everywhere)");
    return RadialFunction(std::move(r), std::move(v));
}

inline BarrierEnvelope finite_index_barrier(const ModelManifold& M, const GreenKernel& G,
                                            BarrierMode mode, double lambda, double T,
                                            int grid_n = defaults::grid_n) {
    if (!G.nonparabolic)
        throw hypothesis_error("finite_index_barrier: model is parabolic (no Green kernel)");
    if (!(T >= G.t_min()) || !(T + 0.2 <= G.t_max()))
        throw config_error("finite_index_barrier: t-range too short (enlarge R_max)");
    if (mode == BarrierMode::kappa_threshold && !(T > std::exp(1.0)))
        throw config_error("finite_index_barrier: kappa mode needs T > e");

    const auto& r = G.G.r;
    const std::size_t N = r.size();
    (void)grid_n;

    // beta at the node values of t inside the window
    std::vector<double> beta_at(N, 0.0);
    if (mode == BarrierMode::kappa_threshold) {
        std::vector<OdeDP45::Step> steps;
        OdeDP45 ode(
            [](double t, const std::vector<double>& y, std::vector<double>& dy) {
                dy[0] = y[1];
                dy[1] = -KappaPotential::kappa_minus_one(t) * y[0];
            },
            1e-12, 1e-14);
        ode.integrate(T, {1.0, 1.0}, G.t_max() * (1 + 1e-12),
                      [&steps](const OdeDP45::Step& s) { steps.push_back(s); });
        std::size_t si = 0;
        for (std::size_t i = 0; i < N; ++i) {
            double t = G.t_of_r.v[i];
            if (t < T) continue;
            while (si + 1 < steps.size() && steps[si].t1 < t) ++si;
            beta_at[i] = OdeDP45::dense_eval(steps[si], 0, std::min(t, steps[si].t1));
        }
    } else {
        for (std::size_t i = 0; i < N; ++i) {
            double t = G.t_of_r.v[i];
            if (t < T) continue;
            beta_at[i] = (lambda == 1.0) ? t : std::exp(std::sqrt(1.0 - lambda) * (t - T));
        }
    }

    BarrierEnvelope out;
    out.T = T;
    std::vector<double> uv(N, 0.0), av(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        double t = G.t_of_r.v[i];
        double Gv = G.G.v[i];
        double grad_log_G = 1.0 / (std::pow(M.g(r[i]), M.m - 1) * Gv);  // |grad log G|
        double coef = (mode == BarrierMode::kappa_threshold) ? KappaPotential::kappa(t) : lambda;
        av[i] = coef * grad_log_G * grad_log_G / 4.0;
        if (t >= T) uv[i] = std::sqrt(Gv) * beta_at[i];
    }
    out.a_field = RadialFunction(r, av);

    // discrete certificate on interior window nodes (both neighbours inside)
    RadialGrid grid(r.front(), r.back(), static_cast<int>(N - 1));
    RadialOperator op(M, grid, false);
    const double h = grid.h();
    for (std::size_t i = 1; i + 1 < N; ++i) {
        if (!(G.t_of_r.v[i - 1] >= T)) continue;
        double lap = (op.face[i] * (uv[i + 1] - uv[i]) - op.face[i - 1] * (uv[i] - uv[i - 1])) /
                     (h * op.vol[i]);
        double res = lap + av[i] * uv[i];
        out.residual.push_back(res);
        out.certified_r.push_back(r[i]);
        out.worst_residual = std::max(out.worst_residual, res);
    }
    if (out.certified_r.size() < 8)
        throw config_error("finite_index_barrier: t-range too short (too few certified nodes)");
    out.certified = out.worst_residual <= tol::barrier_envelope;
    // the envelope is reported on the window only
    std::vector<double> wr, wu;
    for (std::size_t i = 0; i < N; ++i)
        if (G.t_of_r.v[i] >= T) {
            wr.push_back(r[i]);
            wu.push_back(uv[i]);
        }
    out.u = RadialFunction(std::move(wr), std::move(wu));
    if (mode == BarrierMode::kappa_threshold) {
        std::vector<double> gr, gv;
        for (std::size_t i = 0; i < N; ++i)
            if (G.t_of_r.v[i] >= T) {
                gr.push_back(r[i]);
                gv.push_back(G.G.v[i]);
            }
        out.phi = phi_envelope(RadialFunction(std::move(gr), std::move(gv)));
    }
    return out;
}

}  // namespace lichlab
