#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "lichlab/bounds.hpp"
#include "lichlab/common.hpp"
#include "lichlab/model.hpp"
#include "lichlab/nonlinearity.hpp"
#include "lichlab/solver.hpp"
#include "lichlab/spectral.hpp"

namespace lichlab {

// Predicates of the spectrally-negative existence theorem: b > 0 outside a
// compact set, lambda_1(Delta + a) positive on the zero set of b, and
// lambda_1(Delta + a)(M) negative with a conservative certificate.
struct TheoremAHypotheses {
    RadialSet b_zero_set;
    bool b_positive_outside_compact = false;
    double lambda1_B0 = 0.0;
    bool spectrally_small_B0 = false;  // (B_0 condition)
    SpectralEvidence lambda1_M;        // negativity evidence
    bool all() const {
        return b_positive_outside_compact && spectrally_small_B0 &&
               lambda1_M.certified_negative;
    }
};

inline TheoremAHypotheses theoremA_hypotheses(const CoefficientSet& C, const ModelManifold& M,
                                              int grid_n = defaults::grid_n) {
    TheoremAHypotheses out;
    out.b_zero_set = zero_set(C.b, M, grid_n);
    out.b_positive_outside_compact =
        out.b_zero_set.kind == RadialSet::Kind::empty || out.b_zero_set.r2 < 0.9 * M.r_max;
    out.lambda1_B0 = lambda1_bounded_set(M, C.a, out.b_zero_set, grid_n);
    out.spectrally_small_B0 = out.lambda1_B0 > 0;
    out.lambda1_M = lambda1_at_infinity(M, C.a, grid_n);
    return out;
}

// Global subsolution for the spectrally-negative pipeline: the scaled first
// eigenfunction of Delta + a - gamma b on a slightly enlarged ball.  It is a
// subsolution of the Yamabe-type reduction (c dropped), hence of the full
// equation since c >= 0.
inline CertifiedFunction theoremA_subsolution(const CoefficientSet& C, const ModelManifold& M,
                                              int grid_n = defaults::grid_n) {
    if (!M.warp.closed_form())
        throw config_error(
            "theoremA_subsolution: needs a closed-form warping (the witness eigenfunction "
            "lives on a slightly enlarged ball)");
    const double r_ext = 1.05 * M.r_max;
    for (double gamma = 1e-3; gamma <= 1.0 + 1e-12; gamma *= 4.0) {
        RadialField pot = RadialField::from_callable(
            [&C, gamma](double r) { return C.a(r) - gamma * C.b(r); }, false, "a - gamma b");
        EigenResult eig = lambda1_ball(M, pot, r_ext, grid_n);
        if (!(eig.lambda1 < -1e-10)) continue;
        double sup_psi = eig.eigenfunction.max_value();
        double mu = std::pow(gamma, 1.0 / (C.sigma - 1.0)) / sup_psi;
        RadialGrid grid(0.0, M.r_max, grid_n);
        RadialOperator op(M, grid, true);
        std::vector<double> vals(grid.size());
        for (int i = 0; i < grid.size(); ++i) vals[i] = mu * eig.eigenfunction(grid.node(i));
        CertifiedFunction w = certify(M, C, op, std::move(vals), BarrierRole::subsolution);
        if (w.certified) return w;
    }
    throw hypothesis_error(
        "theoremA_subsolution: no gamma produced a certified eigenfunction subsolution "
        "(is lambda_1(Delta + a)(M) negative?)");
}

// Predicate table of the bilateral a priori estimate (checkable half).
struct AprioriHypotheses {
    bool b_positive = false, c_positive = false;
    bool brmu_b = false, brmu_c = false;
    bool bvol = false;
    RatioBounds ratios;
    double sup_apc = 0.0;  // sup (a_+ + c) over the window
    double sup_amb = 0.0;  // sup (a_- + b) over the window
    bool all() const {
        return b_positive && c_positive && brmu_b && brmu_c && bvol && is_finite(ratios.H) &&
               is_finite(ratios.K);
    }
};

inline AprioriHypotheses apriori_hypotheses(const CoefficientSet& C, const ModelManifold& M,
                                            double mu = 0.0, int samples = defaults::grid_n) {
    AprioriHypotheses out;
    out.ratios = ratio_bounds(C, M, samples);
    out.b_positive = out.c_positive = true;
    double binf = infinity, cinf = infinity;
    for (int i = 0; i <= samples; ++i) {
        double r = M.r_max * i / samples;
        double b = C.b(r), c = C.c(r), a = C.a(r);
        if (!(b > 0)) out.b_positive = false;
        if (!(c > 0)) out.c_positive = false;
        if (r >= 0.25 * M.r_max) {
            binf = std::min(binf, b * std::pow(std::max(r, 1e-30), mu));
            cinf = std::min(cinf, c * std::pow(std::max(r, 1e-30), mu));
        }
        out.sup_apc = std::max(out.sup_apc, positive_part(a) + c);
        out.sup_amb = std::max(out.sup_amb, negative_part(a) + b);
    }
    out.brmu_b = out.b_positive && binf > 0;
    out.brmu_c = out.c_positive && cinf > 0;
    out.bvol = volume_growth_check(M, mu, samples).finite;
    return out;
}

// Predicate table of the comparison theorem (hypotheses i-iv plus the
// liminf/limsup window diagnostics for a given pair of solutions).
struct ComparisonHypotheses {
    bool b_positive_outside = false;  // i)
    bool c_nonnegative_outside = false;  // ii)
    double sup_amb_ratio = infinity;  // iii) sup a_-/b
    double sup_cb_ratio = infinity;   // iv)  sup c/b
    bool ratios_finite = false;
    double v_tail_min = 0.0;   // liminf window estimate for v
    double u_tail_max = 0.0;   // limsup window estimate for u
    bool vlim = false, ulim = true;
    bool all() const {
        return b_positive_outside && c_nonnegative_outside && ratios_finite && vlim && ulim;
    }
};

inline ComparisonHypotheses comparison_hypotheses(const CoefficientSet& C,
                                                  const ModelManifold& M, double omega_R,
                                                  const RadialFunction& u,
                                                  const RadialFunction& v,
                                                  int samples = defaults::grid_n) {
    ComparisonHypotheses out;
    out.b_positive_outside = out.c_nonnegative_outside = true;
    double amb = 0.0, cb = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double r = M.r_max * i / samples;
        double b = C.b(r), c = C.c(r), a = C.a(r);
        if (r > omega_R) {
            if (!(b > 0)) out.b_positive_outside = false;
            if (c < 0) out.c_nonnegative_outside = false;
        }
        amb = std::max(amb, detail::safe_ratio(negative_part(a), b));
        cb = std::max(cb, detail::safe_ratio(c, b));
    }
    out.sup_amb_ratio = amb;
    out.sup_cb_ratio = cb;
    // iv) can be dropped for 0 <= tau < 1
    bool need_cb = C.tau < 0;
    out.ratios_finite = is_finite(amb) && (!need_cb || is_finite(cb));
    double tail_lo = 0.75 * M.r_max;
    double vmin = infinity, umax = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double r = tail_lo + (M.r_max - tail_lo) * i / samples;
        vmin = std::min(vmin, v(r));
        umax = std::max(umax, u(r));
    }
    out.v_tail_min = vmin;
    out.u_tail_max = umax;
    out.vlim = vmin > 0;
    out.ulim = is_finite(umax);
    return out;
}

}  // namespace lichlab
