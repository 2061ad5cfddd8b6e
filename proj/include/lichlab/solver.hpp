#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lichlab/common.hpp"
#include "lichlab/fd.hpp"
#include "lichlab/model.hpp"
#include "lichlab/nonlinearity.hpp"
#include "lichlab/radial.hpp"

namespace lichlab {

struct DirichletProblem {
    ModelManifold M;
    CoefficientSet C;
    double radius = 1.0;
    double boundary_value = 1.0;
    BarrierPair barriers;
    int grid_n = defaults::grid_n;
};

struct SolveReport {
    RadialFunction solution;
    int iterations = 0;
    double residual_max = 0.0;      // scaled by the local nonlinearity magnitude
    double residual_max_abs = 0.0;  // plain sup of the discrete residual
    std::vector<double> trace;  // sup-norm deltas per iteration
    bool monotone_certificate = true;
    bool sandwich_certificate = true;
    bool trace_decreasing_after_burnin = true;
    double lambda_shift_max = 0.0;
    std::vector<std::pair<std::string, bool>> bound_checks;  // filled by pipelines
};

namespace detail {

// Upper bound for sup over [lo, hi] of -df/du at a node; each term of
// -df/du = -a + sigma b u^{sigma-1} - tau c u^{tau-1} is bounded at its own
// worst endpoint.
inline double shift_bound(double a, double b, double c, double sigma, double tau, double lo,
                          double hi) {
    double s = -a + sigma * b * std::pow(hi, sigma - 1.0);
    if (tau <= 0 && c > 0) s += (-tau) * c * std::pow(lo, tau - 1.0);
    return s;
}

}  // namespace detail

// Monotone iteration u_{k+1} = (lambda_shift - Delta)^{-1} (f(., u_k) +
// lambda_shift u_k), descending from the supersolution.  The shift is
// recomputed per node from the current order interval [sub, u_k], which
// keeps f(x, u) + lambda_shift(x) u nondecreasing on it while letting the
// interior contract fast once the interval tightens.  An optional start
// must itself be a supersolution with the problem's boundary value.
inline SolveReport solve_dirichlet(const DirichletProblem& P,
                                   const std::vector<double>* warm_start = nullptr) {
    if (!is_finite(P.boundary_value) || !(P.boundary_value > 0))
        throw config_error("solve_dirichlet: boundary value must be finite and positive");
    if (!P.barriers.sub.certified || P.barriers.sub.role != BarrierRole::subsolution)
        throw config_error("solve_dirichlet: subsolution certificate missing");
    if (!P.barriers.sup.certified || P.barriers.sup.role != BarrierRole::supersolution)
        throw config_error("solve_dirichlet: supersolution certificate missing");

    RadialGrid grid(0.0, P.radius, P.grid_n);
    RadialOperator op(P.M, grid, true);
    NodalCoefficients coef(P.C, grid);
    const int n = grid.n;
    const double h = grid.h();

    std::vector<double> sub(n + 1), sup(n + 1);
    for (int i = 0; i <= n; ++i) {
        sub[i] = P.barriers.sub(grid.node(i));
        sup[i] = P.barriers.sup(grid.node(i));
        if (sub[i] > sup[i] + tol::compare)
            throw config_error("solve_dirichlet: barriers not ordered at r=" +
                               std::to_string(grid.node(i)));
    }
    double scale = std::max(1.0, std::fabs(P.boundary_value));
    if (P.boundary_value < sub[n] - tol::compare * scale)
        throw config_error("solve_dirichlet: boundary value below the subsolution");
    if (P.boundary_value > sup[n] + tol::compare * scale)
        throw config_error("solve_dirichlet: boundary value above the supersolution");

    std::vector<double> u = warm_start ? *warm_start : sup;
    if (warm_start && static_cast<int>(u.size()) != n + 1)
        throw config_error("solve_dirichlet: warm start has wrong grid size");
    u[n] = P.boundary_value;

    // Lower ends of the per-node shift intervals.  With tau < 0 the shift
    // bound carries lo^{tau-1}, so the interval must not reach down to a
    // slack subsolution's tail; at nodes with a singular source the iterates
    // are kept above (a fraction of) the local singular-balance equilibrium
    // eta solving a_- t + b t^sigma = c t^tau, validated after each sweep.
    std::vector<double> lo_floor(n, 1e-14);
    if (P.C.tau < 0) {
        for (int i = 0; i < n; ++i) {
            if (!(coef.c[i] > 0)) continue;
            auto excess = [&](double t) {
                return negative_part(coef.a[i]) * t + coef.b[i] * std::pow(t, P.C.sigma) -
                       coef.c[i] * std::pow(t, P.C.tau);
            };
            double hi_b = 1.0;
            while (excess(hi_b) < 0) hi_b *= 2.0;
            double lo_b = hi_b;
            while (lo_b > 1e-280 && excess(lo_b) > 0) lo_b *= 0.5;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo_b + hi_b);
                (excess(mid) < 0 ? lo_b : hi_b) = mid;
            }
            lo_floor[i] = std::max(1e-14, 0.45 * lo_b);
        }
    }

    SolveReport rep;
    std::vector<double> lam(n, 0.0), lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    std::vector<double> unew(n + 1);

    for (int iter = 1; iter <= defaults::max_monotone_iterations; ++iter) {
        for (int redo = 0;; ++redo) {
            // per-node shift on the current order interval
            for (int i = 0; i < n; ++i) {
                double lo = std::max(std::min(lo_floor[i], u[i]), 1e-14);
                double s = detail::shift_bound(coef.a[i], coef.b[i], coef.c[i], P.C.sigma,
                                               P.C.tau, lo, std::max(u[i], lo));
                lam[i] = 1.1 * std::max(0.0, s);
                rep.lambda_shift_max = std::max(rep.lambda_shift_max, lam[i]);
            }
            // assemble (lambda_shift - Delta); off-diagonals nonpositive and
            // the diagonal dominates, the discrete maximum principle
            for (int i = 0; i < n; ++i) {
                double fl = (i == 0) ? 0.0 : op.face[i - 1];
                double fr = op.face[i];
                lower[i] = (i == 0) ? 0.0 : -fl / (h * op.vol[i]);
                upper[i] = -fr / (h * op.vol[i]);
                diag[i] = (fl + fr) / (h * op.vol[i]) + lam[i];
                if (!(diag[i] > 0) || lower[i] > 0 || upper[i] > 0)
                    throw numerical_error("solve_dirichlet: maximum-principle structure violated");
                double fu = coef.a[i] * u[i] - coef.b[i] * std::pow(u[i], P.C.sigma) +
                            coef.c[i] * std::pow(u[i], P.C.tau);
                rhs[i] = fu + lam[i] * u[i];
            }
            rhs[n - 1] += op.face[n - 1] / (h * op.vol[n - 1]) * P.boundary_value;
            std::vector<double> sol =
                solve_tridiagonal(lower, diag, {upper.begin(), upper.end() - 1}, rhs);
            for (int i = 0; i < n; ++i) unew[i] = sol[i];
            unew[n] = P.boundary_value;
            // a-posteriori interval validation: the sweep's shift covered
            // [lo_floor, u]; if the new iterate fell below, lower the floor
            // (raising the shift) and redo the sweep
            bool valid = true;
            for (int i = 0; i < n; ++i)
                if (unew[i] < lo_floor[i] && unew[i] < u[i]) {
                    valid = false;
                    lo_floor[i] = std::max(1e-14, 0.5 * std::max(unew[i], 0.0));
                }
            if (valid) break;
            if (redo >= 8)
                throw numerical_error("solve_dirichlet: shift-interval validation kept failing");
        }

        // deltas and monotonicity are judged against the local solution
        // scale; boundary layers with huge values must not mask interior
        // convergence (nor can values near 1e10 move by less than an ulp)
        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            double local = 1.0 + std::fabs(u[i]);
            if (unew[i] > u[i] + 1e-12 * local) rep.monotone_certificate = false;
            if (unew[i] < sub[i] - 1e-6 * local)
                throw numerical_error("solve_dirichlet: iterate crossed the subsolution");
            delta = std::max(delta, std::fabs(unew[i] - u[i]) / local);
        }
        rep.trace.push_back(delta);
        u.swap(unew);
        rep.iterations = iter;

        if (delta < tol::step) {
            auto res = nonlinear_residual(op, coef, P.C, u);
            double rmax = 0.0, rabs = 0.0;
            for (int i = 0; i < n; ++i) {
                double fscale = 1.0 + std::fabs(coef.a[i]) * u[i] +
                                coef.b[i] * std::pow(u[i], P.C.sigma) +
                                coef.c[i] * std::pow(u[i], P.C.tau);
                rmax = std::max(rmax, std::fabs(res[i]) / fscale);
                rabs = std::max(rabs, std::fabs(res[i]));
            }
            rep.residual_max = rmax;
            rep.residual_max_abs = rabs;
            if (rmax < tol::residual) break;
        }
        if (iter == defaults::max_monotone_iterations)
            throw numerical_error("solve_dirichlet: no convergence within the iteration budget");
    }

    for (int i = 0; i <= n; ++i)
        if (u[i] < sub[i] - 1e-6 * (1.0 + std::fabs(u[i])) ||
            u[i] > sup[i] + 1e-6 * (1.0 + std::fabs(u[i])))
            rep.sandwich_certificate = false;
    constexpr int burnin = 3;
    for (std::size_t k = burnin + 1; k < rep.trace.size(); ++k)
        if (rep.trace[k] > rep.trace[k - 1] * (1.0 + 1e-9) + 1e-300)
            rep.trace_decreasing_after_burnin = false;
    rep.solution = RadialFunction(grid.nodes(), u);
    return rep;
}

// Barrier data for a blow-up run: a certified global subsolution (also the
// property-(Sigma) witness) and a positive base supersolution to rescale.
struct BlowupBarriers {
    CertifiedFunction sub;
    CertifiedFunction base_sup;
};

// Builds barriers on [0, R]: the constant pair when H and K are finite,
// otherwise the eigenfunction/constant blend around the zero set of b for
// the supersolution plus a property-(Sigma) witness for the subsolution.
inline BlowupBarriers prepare_barriers(const CoefficientSet& C, const ModelManifold& M, double R,
                                       const std::optional<RadialFunction>& sigma_witness =
                                           std::nullopt,
                                       int grid_n = defaults::grid_n) {
    BlowupBarriers out;
    RatioBounds rb = ratio_bounds(C, M, grid_n);
    RadialGrid grid(0.0, R, grid_n);
    RadialOperator op(M, grid, true);
    if (is_finite(rb.H) && is_finite(rb.K) && rb.script_K > 0) {
        out.sub = certify(M, C, op, std::vector<double>(grid.size(), rb.script_K),
                          BarrierRole::subsolution);
        out.base_sup = certify(M, C, op, std::vector<double>(grid.size(), rb.script_H),
                               BarrierRole::supersolution);
        if (out.sub.certified && out.base_sup.certified) return out;
    }
    // supersolution around the zero set of b
    RadialSet b0 = zero_set(C.b, M, grid_n);
    double lam_b0 = lambda1_bounded_set(M, C.a, b0, grid_n);
    if (!(lam_b0 > 0))
        throw hypothesis_error("prepare_barriers: lambda_1(Delta + a) on the zero set of b "
                               "is not positive");
    double dprime = 0.0, dball = 0.0;
    if (b0.kind != RadialSet::Kind::empty) {
        dprime = std::min(b0.r2 * 1.3 + 4 * grid.h(), 0.7 * R);
        dball = std::min(b0.r2 * 1.6 + 8 * grid.h(), 0.8 * R);
        if (!(b0.r2 < dprime))
            throw hypothesis_error("prepare_barriers: zero set of b too close to the boundary");
    }
    SupersolutionResult sup = lemma1_supersolution(C, M, C.a, R, dprime, dball, grid_n);
    out.base_sup = std::move(sup.v);

    SigmaResult sig = sigma_property(C, M, R, sigma_witness, grid_n);
    if (!sig.holds)
        throw hypothesis_error("prepare_barriers: no property-(Sigma) witness: " +
                               sig.diagnostics);
    // scale the witness below the supersolution
    double sup_min = out.base_sup.fn.min_value();
    double wit_max = sig.witness.fn.max_value();
    double scale = (wit_max > 0 && wit_max > sup_min) ? 0.5 * sup_min / wit_max : 1.0;
    if (scale < 1.0) {
        std::vector<double> vals = sig.witness.fn.v;
        for (double& v : vals) v *= scale;  // beta <= 1 rescaling keeps subsolutions
        out.sub = certify(M, C, op, std::move(vals), BarrierRole::subsolution);
        if (!out.sub.certified)
            throw numerical_error("prepare_barriers: rescaled witness lost its certificate");
    } else {
        out.sub = std::move(sig.witness);
    }
    return out;
}

// Solutions of the boundary-value family u = 2^k on the sphere, k = 0..K.
// The supersolution for level n is the zeta-rescaled base; successive
// levels warm-start from twice the previous solution (again a
// supersolution, with boundary value exactly n).
inline std::vector<SolveReport> boundary_n_sequence(const ModelManifold& M,
                                                    const CoefficientSet& C, double R,
                                                    const BlowupBarriers& barriers, int K,
                                                    int grid_n = defaults::grid_n) {
    std::vector<SolveReport> out;
    RadialGrid grid(0.0, R, grid_n);
    const std::vector<double>* prev = nullptr;
    std::vector<double> start(grid.size());
    for (int k = 0; k <= K; ++k) {
        double n_val = std::pow(2.0, k);
        double base_boundary = barriers.base_sup(R);
        double zeta = std::max(1.0, n_val / base_boundary);
        std::vector<double> sup_vals(grid.size());
        for (int i = 0; i < grid.size(); ++i)
            sup_vals[i] = zeta * barriers.base_sup(grid.node(i));
        // re-certification is not needed: zeta >= 1 rescaling preserves the
        // supersolution inequality exactly
        CertifiedFunction sup_n;
        sup_n.fn = RadialFunction(grid.nodes(), sup_vals);
        sup_n.role = BarrierRole::supersolution;
        sup_n.certified = barriers.base_sup.certified;
        sup_n.worst = barriers.base_sup.worst;

        DirichletProblem P;
        P.M = M;
        P.C = C;
        P.radius = R;
        P.boundary_value = n_val;
        P.grid_n = grid_n;
        P.barriers.sub = barriers.sub;
        P.barriers.sup = sup_n;
        P.barriers.domain_lo = 0.0;
        P.barriers.domain_hi = R;

        if (prev) {
            for (int i = 0; i < grid.size(); ++i)
                start[i] = std::min(sup_vals[i], 2.0 * (*prev)[i]);
            out.push_back(solve_dirichlet(P, &start));
        } else {
            out.push_back(solve_dirichlet(P));
        }
        if (out.size() >= 2) {
            const auto& ua = out[out.size() - 2].solution.v;
            const auto& ub = out.back().solution.v;
            for (std::size_t i = 0; i < ua.size(); ++i)
                if (ua[i] > ub[i] + 1e-9 * std::max(1.0, ub[i]))
                    throw numerical_error(
                        "boundary_n_sequence: monotonicity in n violated (discretization "
                        "failure)");
        }
        prev = &out.back().solution.v;
    }
    return out;
}

struct BlowupOptions {
    double core_fraction = 0.9;    // stabilization is monitored on r <= fraction * R
    double monitor_radius = 0.0;   // overrides the fraction when positive
    double stop_tol = tol::blowup_core;
    int max_doublings = defaults::max_boundary_doublings;
};

struct BlowupResult {
    RadialFunction core_limit;  // restricted to the monitor core
    RadialFunction last_full;   // last computed solution on [0, R]
    int doublings = 0;
    bool stabilized = false;         // monitor delta dropped below stop_tol
    bool resolution_limited = false; // doubling saturated the grid's boundary layer
    double last_core_delta = 0.0;
};

// Boundary blow-up solution as the limit of the doubling family, detected
// by interior stabilization on the monitor core.  Near the boundary the
// Dirichlet layer of width ~ 1/n eventually falls below the mesh width; past
// that point the monitor deltas decay only algebraically (the unresolved
// layer keeps shifting the effective blow-up anchor by fractions of a cell),
// so a long slowly-decaying tail is reported as a resolution-limited limit
// rather than iterated to the doubling cap.
inline BlowupResult blowup_solution(const ModelManifold& M, const CoefficientSet& C, double R,
                                    const BlowupBarriers& barriers,
                                    int grid_n = defaults::grid_n,
                                    const BlowupOptions& opt = BlowupOptions{}) {
    RadialSet b0 = zero_set(C.b, M, grid_n);
    if (b0.kind != RadialSet::Kind::empty && !(b0.r2 < R))
        throw hypothesis_error("blowup_solution: zero set of b not inside the domain");
    double lam_b0 = lambda1_bounded_set(M, C.a, b0, grid_n);
    if (!(lam_b0 > 0))
        throw hypothesis_error("blowup_solution: lambda_1(Delta + a) on the zero set of b "
                               "is not positive");
    if (!barriers.sub.certified)
        throw hypothesis_error("blowup_solution: property-(Sigma) witness certificate missing");

    const double core =
        opt.monitor_radius > 0 ? std::min(opt.monitor_radius, R) : opt.core_fraction * R;
    RadialGrid grid(0.0, R, grid_n);
    const std::vector<double>* prev = nullptr;
    std::vector<double> start(grid.size()), prev_vals, deltas;
    BlowupResult out;
    SolveReport rep;
    for (int k = 0; k <= opt.max_doublings; ++k) {
        double n_val = std::pow(2.0, k);
        double zeta = std::max(1.0, n_val / barriers.base_sup(R));
        std::vector<double> sup_vals(grid.size());
        for (int i = 0; i < grid.size(); ++i)
            sup_vals[i] = zeta * barriers.base_sup(grid.node(i));
        CertifiedFunction sup_n;
        sup_n.fn = RadialFunction(grid.nodes(), sup_vals);
        sup_n.role = BarrierRole::supersolution;
        sup_n.certified = barriers.base_sup.certified;
        sup_n.worst = barriers.base_sup.worst;

        DirichletProblem P;
        P.M = M;
        P.C = C;
        P.radius = R;
        P.boundary_value = n_val;
        P.grid_n = grid_n;
        P.barriers.sub = barriers.sub;
        P.barriers.sup = sup_n;

        if (prev) {
            for (int i = 0; i < grid.size(); ++i)
                start[i] = std::min(sup_vals[i], 2.0 * (*prev)[i]);
            rep = solve_dirichlet(P, &start);
        } else {
            rep = solve_dirichlet(P);
        }
        out.doublings = k;
        if (!prev_vals.empty()) {
            double core_delta = 0.0;
            for (int i = 0; i < grid.size(); ++i)
                if (grid.node(i) <= core)
                    core_delta = std::max(core_delta,
                                          std::fabs(rep.solution.v[i] - prev_vals[i]));
            deltas.push_back(core_delta);
            out.last_core_delta = core_delta;
            if (core_delta < opt.stop_tol) {
                out.stabilized = true;
            } else if (deltas.size() >= 8) {
                // algebraic tail signature: eight consecutive decreasing
                // deltas with slow ratios
                bool tail = true;
                for (std::size_t j = deltas.size() - 7; j < deltas.size(); ++j) {
                    double ratio = deltas[j] / deltas[j - 1];
                    if (!(ratio < 0.995) || ratio < 0.70) tail = false;
                }
                if (tail) out.resolution_limited = true;
            }
            if (out.stabilized || out.resolution_limited) {
                prev_vals = rep.solution.v;
                break;
            }
        }
        prev_vals = rep.solution.v;
        prev = &prev_vals;
    }
    if (!out.stabilized && !out.resolution_limited)
        throw numerical_error(
            "blowup_solution: interior bound failed (no stabilization before the doubling cap)");
    out.last_full = rep.solution;
    out.core_limit = rep.solution.restrict_to(core);
    return out;
}

struct MaximalSolutionReport {
    RadialFunction solution;  // on the common core
    std::vector<double> exhaustion_radii;
    std::vector<RadialFunction> core_restrictions;
    bool monotone_decreasing_certificate = true;
    bool above_subsolution_certificate = true;
};

// Maximal solution as the decreasing limit of blow-up solutions over an
// exhaustion, restricted to the smallest core.
inline MaximalSolutionReport maximal_solution(const ModelManifold& M, const CoefficientSet& C,
                                              const CertifiedFunction& u_minus,
                                              const std::vector<double>& radii,
                                              int grid_n = defaults::grid_n) {
    if (radii.empty()) throw config_error("maximal_solution: empty exhaustion");
    if (!u_minus.certified || u_minus.role != BarrierRole::subsolution)
        throw config_error("maximal_solution: subsolution certificate missing");
    for (double v : u_minus.fn.v)
        if (!(v > 0)) throw config_error("maximal_solution: subsolution must be positive");

    MaximalSolutionReport out;
    const double core = 0.9 * radii.front();
    for (std::size_t j = 0; j < radii.size(); ++j) {
        if (j > 0 && !(radii[j] > radii[j - 1]))
            throw config_error("maximal_solution: radii must increase");
        if (radii[j] > M.r_max) throw config_error("maximal_solution: radius beyond the window");
        BlowupBarriers barriers = prepare_barriers(C, M, radii[j], u_minus.fn, grid_n);
        BlowupOptions opt;
        opt.monitor_radius = core;  // the exhaustion limit lives on the common core
        BlowupResult blow = blowup_solution(M, C, radii[j], barriers, grid_n, opt);
        if (j + 1 == radii.size() && !blow.stabilized)
            throw numerical_error(
                "maximal_solution: final exhaustion member did not stabilize on the core");
        out.exhaustion_radii.push_back(radii[j]);
        out.core_restrictions.push_back(blow.last_full.restrict_to(core));
    }
    // restrictions must decrease in the exhaustion index and stay above the
    // subsolution; interpolation between unequal grids gets O(h^2) slack
    const auto& final_core = out.core_restrictions.back();
    double slack = 1e-5 * std::max(1.0, final_core.max_value());
    for (std::size_t j = 1; j < out.core_restrictions.size(); ++j) {
        for (std::size_t i = 0; i < final_core.r.size(); ++i) {
            double r = final_core.r[i];
            if (out.core_restrictions[j](r) > out.core_restrictions[j - 1](r) + slack)
                out.monotone_decreasing_certificate = false;
        }
    }
    for (std::size_t i = 0; i < final_core.r.size(); ++i)
        if (final_core.v[i] < u_minus(final_core.r[i]) - slack)
            out.above_subsolution_certificate = false;
    if (!out.monotone_decreasing_certificate)
        throw numerical_error("maximal_solution: exhaustion restrictions not decreasing");
    out.solution = final_core;
    return out;
}

// Discrete comparison verdict for certified ordered barriers.
inline bool compare(const CertifiedFunction& u, const CertifiedFunction& v,
                    double tolerance = tol::compare) {
    if (!u.certified || u.role != BarrierRole::subsolution)
        throw config_error("compare: first argument must carry a subsolution certificate");
    if (!v.certified || v.role != BarrierRole::supersolution)
        throw config_error("compare: second argument must carry a supersolution certificate");
    for (double val : v.fn.v)
        if (!(val > 0)) throw config_error("compare: supersolution must be positive");
    double hi = std::min(u.fn.back_r(), v.fn.back_r());
    double scale = std::max(1.0, std::max(u.fn.max_value(), v.fn.max_value()));
    if (u.fn(hi) > v.fn(hi) + tolerance * scale)
        throw config_error("compare: boundary ordering u <= v violated");
    for (std::size_t i = 0; i < u.fn.r.size(); ++i) {
        double r = u.fn.r[i];
        if (r > hi) break;
        if (u.fn.v[i] > v.fn(r) + tolerance * scale) return false;
    }
    return true;
}

struct UniquenessDiagnostic {
    bool condition_uvint = false;  // 1 / int_{dB_r} (u-v)^2 not integrable at infinity
    bool vacuous = false;          // u and v coincide within solver tolerance
    std::vector<double> radii;
    std::vector<double> sphere_integrals;  // I(r) = omega g^{m-1} (u-v)^2
    std::string tail_model;
};

// Divergence test for int^inf dr / I(r) with I(r) the boundary-sphere
// integral of (u - v)^2; the tail of I is classified by power/exponential
// fits, and the paper-side uniqueness hypothesis holds when 1/I fails to be
// integrable (power exponent <= 1 or decaying tail).
inline UniquenessDiagnostic uniqueness_l2_diagnostic(const RadialFunction& u,
                                                     const RadialFunction& v,
                                                     const ModelManifold& M, int samples = 400) {
    UniquenessDiagnostic out;
    const double omega = unit_sphere_area(M.m);
    double lo = std::max(0.05 * M.r_max, std::max(u.front_r(), v.front_r()));
    double hi = std::min({M.r_max, u.back_r(), v.back_r()});
    double scale = std::max(u.max_value(), v.max_value());
    double maxdiff = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double r = lo + (hi - lo) * i / samples;
        double diff = u(r) - v(r);
        maxdiff = std::max(maxdiff, std::fabs(diff));
        out.radii.push_back(r);
        out.sphere_integrals.push_back(omega * M.weight(r) * diff * diff);
    }
    if (maxdiff < 1e-12 * std::max(1.0, scale)) {
        out.vacuous = true;
        out.condition_uvint = true;
        out.tail_model = "coincident";
        return out;
    }
    // fit log I against log r and against r on the upper half of the window
    std::size_t start = out.radii.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, tx = 0, txx = 0, txy = 0;
    std::size_t cnt = 0;
    for (std::size_t i = start; i < out.radii.size(); ++i) {
        if (!(out.sphere_integrals[i] > 0)) continue;
        double lr = std::log(out.radii[i]), li = std::log(out.sphere_integrals[i]);
        sx += lr; sy += li; sxx += lr * lr; sxy += lr * li;
        tx += out.radii[i]; txx += out.radii[i] * out.radii[i]; txy += out.radii[i] * li;
        ++cnt;
    }
    if (cnt < 4) throw numerical_error("uniqueness diagnostic: too few positive samples");
    double nn = static_cast<double>(cnt);
    double p = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    double q = (nn * txy - tx * sy) / (nn * txx - tx * tx);
    double ap = (sy - p * sx) / nn, ae = (sy - q * tx) / nn;
    double res_p = 0, res_e = 0;
    for (std::size_t i = start; i < out.radii.size(); ++i) {
        if (!(out.sphere_integrals[i] > 0)) continue;
        double li = std::log(out.sphere_integrals[i]);
        double ep = li - (ap + p * std::log(out.radii[i]));
        double ee = li - (ae + q * out.radii[i]);
        res_p += ep * ep;
        res_e += ee * ee;
    }
    if (res_p <= res_e) {
        out.tail_model = "power(" + std::to_string(p) + ")";
        out.condition_uvint = (p <= 1.0);
    } else {
        out.tail_model = "exponential(" + std::to_string(q) + ")";
        out.condition_uvint = (q <= 0.0);
    }
    return out;
}

}  // namespace lichlab
