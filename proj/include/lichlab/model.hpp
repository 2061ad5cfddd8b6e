#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lichlab/common.hpp"
#include "lichlab/ode.hpp"
#include "lichlab/radial.hpp"

namespace lichlab {

enum class WarpKind { euclidean, hyperbolic, tabulated, riccati_generated };

// Warping function g of a rotationally symmetric model, with g(0) = 0,
// g'(0) = 1 and g > 0 on (0, inf).  Closed forms evaluate anywhere; sampled
// kinds interpolate g and g' (cubic Hermite when derivative samples exist).
struct WarpingFunction {
    WarpKind kind = WarpKind::euclidean;
    double curvature_k = 1.0;  // hyperbolic: g(r) = sinh(sqrt(k) r)/sqrt(k)
    RadialFunction g_samples;
    RadialFunction gprime_samples;

    static WarpingFunction euclidean() {
        WarpingFunction w;
        w.kind = WarpKind::euclidean;
        return w;
    }

    static WarpingFunction hyperbolic(double k) {
        if (!(k > 0)) throw config_error("hyperbolic warping needs k > 0");
        WarpingFunction w;
        w.kind = WarpKind::hyperbolic;
        w.curvature_k = k;
        return w;
    }

    static WarpingFunction tabulated(std::vector<double> r, std::vector<double> g) {
        WarpingFunction w;
        w.kind = WarpKind::tabulated;
        w.g_samples = RadialFunction(r, g);
        check_samples(w.g_samples);
        // centred-difference derivative samples
        std::vector<double> dp(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::size_t lo = i == 0 ? 0 : i - 1;
            std::size_t hi = i + 1 < r.size() ? i + 1 : i;
            dp[i] = (g[hi] - g[lo]) / (r[hi] - r[lo]);
        }
        dp[0] = 1.0;  // g'(0) = 1 by the model axioms
        w.gprime_samples = RadialFunction(std::move(r), std::move(dp));
        return w;
    }

    static WarpingFunction riccati(RadialFunction g, RadialFunction gp) {
        WarpingFunction w;
        w.kind = WarpKind::riccati_generated;
        w.g_samples = std::move(g);
        w.gprime_samples = std::move(gp);
        check_samples(w.g_samples);
        return w;
    }

    bool closed_form() const {
        return kind == WarpKind::euclidean || kind == WarpKind::hyperbolic;
    }

    double g(double r) const {
        switch (kind) {
            case WarpKind::euclidean: return r;
            case WarpKind::hyperbolic: {
                double s = std::sqrt(curvature_k);
                return std::sinh(s * r) / s;
            }
            default:
                if (r > g_samples.back_r())
                    throw numerical_error("warping sampled only up to r=" +
                                          std::to_string(g_samples.back_r()));
                return g_samples(r);
        }
    }

    double gprime(double r) const {
        switch (kind) {
            case WarpKind::euclidean: return 1.0;
            case WarpKind::hyperbolic: return std::cosh(std::sqrt(curvature_k) * r);
            default: return gprime_samples(r);
        }
    }

  private:
    static void check_samples(const RadialFunction& gs) {
        if (std::fabs(gs.r.front()) > 1e-12)
            throw config_error("tabulated warping must start at r = 0");
        if (std::fabs(gs.v.front()) > 1e-9)
            throw config_error("warping must satisfy g(0) = 0");
        for (std::size_t i = 1; i < gs.v.size(); ++i)
            if (!(gs.v[i] > 0))
                throw config_error("warping must be positive for r > 0");
    }
};

// Rotationally symmetric model: dimension m >= 2, warping g, truncation R_max.
struct ModelManifold {
    int m = 3;
    WarpingFunction warp;
    double r_max = 10.0;

    ModelManifold() = default;
    ModelManifold(int dim, WarpingFunction w, double rmax) : m(dim), warp(std::move(w)), r_max(rmax) {
        if (m < 2) throw config_error("model dimension must be >= 2");
        if (!(r_max > 0)) throw config_error("model truncation radius must be positive");
    }

    double g(double r) const { return warp.g(r); }
    double gprime(double r) const { return warp.gprime(r); }
    double weight(double r) const { return std::pow(warp.g(r), m - 1); }  // area density / omega
};

// Drift coefficient of the radial Laplacian, (m-1) g'(r)/g(r).  At r = 0 the
// caller must use the symmetry limit Delta u(0) = m u''(0) instead.
inline double laplacian_drift(const ModelManifold& M, double r) {
    if (!(r > 0)) throw config_error("laplacian_drift: r must be positive");
    return (M.m - 1) * M.gprime(r) / M.g(r);
}

// Green kernel G(r) = int_r^inf g^{1-m}, sampled on a singularity-avoiding
// grid, together with the exhaustion parameter t(r) = -1/2 log G(r).
struct GreenKernel {
    bool nonparabolic = false;
    RadialFunction G;
    RadialFunction t_of_r;
    std::string tail_model;  // "closed-form", "power(p)", or "exponential(q)"
    double tail_integral = 0.0;

    double t_min() const { return t_of_r.v.front(); }
    double t_max() const { return t_of_r.v.back(); }

    // Inverse of the (strictly increasing) t map, by bisection on samples.
    double r_of_t(double t) const {
        const auto& tv = t_of_r.v;
        const auto& rv = t_of_r.r;
        if (t <= tv.front()) return rv.front();
        if (t >= tv.back()) return rv.back();
        std::size_t lo = 0, hi = tv.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (tv[mid] <= t ? lo : hi) = mid;
        }
        double w = (t - tv[lo]) / (tv[hi] - tv[lo]);
        return rv[lo] * (1 - w) + rv[hi] * w;
    }
};

namespace detail {

// Best-fit tail model for int_{R}^{inf} g(s)^{1-m} ds when g has no closed
// form: fit log g against log r (power) and against r (exponential) on the
// last quarter of the samples and keep the better fit.
struct TailFit {
    bool convergent = false;
    double integral = 0.0;
    std::string model;
};

inline TailFit fit_tail(const ModelManifold& M, const std::vector<double>& r,
                        const std::vector<double>& g) {
    std::size_t n = r.size();
    std::size_t start = (3 * n) / 4;
    double sxx_p = 0, sxy_p = 0, sx_p = 0, sy_p = 0, sxx_e = 0, sxy_e = 0, sx_e = 0;
    std::size_t cnt = 0;
    for (std::size_t i = start; i < n; ++i) {
        if (!(g[i] > 0) || !(r[i] > 0)) continue;
        double lx = std::log(r[i]), ly = std::log(g[i]);
        sx_p += lx; sy_p += ly; sxx_p += lx * lx; sxy_p += lx * ly;
        sx_e += r[i]; sxx_e += r[i] * r[i]; sxy_e += r[i] * ly;
        ++cnt;
    }
    TailFit out;
    if (cnt < 4) return out;
    double nn = static_cast<double>(cnt);
    double p = (nn * sxy_p - sx_p * sy_p) / (nn * sxx_p - sx_p * sx_p);      // g ~ A r^p
    double q = (nn * sxy_e - sx_e * sy_p) / (nn * sxx_e - sx_e * sx_e);      // g ~ A e^{q r}
    // residuals of the two fits
    double ap = (sy_p - p * sx_p) / nn, ae = (sy_p - q * sx_e) / nn;
    double res_p = 0, res_e = 0;
    for (std::size_t i = start; i < n; ++i) {
        if (!(g[i] > 0) || !(r[i] > 0)) continue;
        double ly = std::log(g[i]);
        double ep = ly - (ap + p * std::log(r[i]));
        double ee = ly - (ae + q * r[i]);
        res_p += ep * ep;
        res_e += ee * ee;
    }
    double R = r.back(), gR = g.back();
    int mm = M.m;
    if (res_p <= res_e) {
        out.model = "power(" + std::to_string(p) + ")";
        double expo = p * (mm - 1);
        if (expo > 1.0) {
            out.convergent = true;
            // int_R^inf (g(R) (s/R)^p)^{1-m} ds = g(R)^{1-m} R / (expo - 1)
            out.integral = std::pow(gR, 1 - mm) * R / (expo - 1.0);
        }
    } else {
        out.model = "exponential(" + std::to_string(q) + ")";
        if (q > 0) {
            out.convergent = true;
            out.integral = std::pow(gR, 1 - mm) / ((mm - 1) * q);
        }
    }
    return out;
}

}  // namespace detail

// Green kernel of the model, or nonparabolic=false when the defining tail
// integral diverges.  Closed-form kinds use exact tails.
inline GreenKernel green_kernel(const ModelManifold& M, int grid_n = defaults::grid_n) {
    GreenKernel out;
    const double eps = defaults::green_eps_rel * M.r_max;
    RadialGrid grid(eps, M.r_max, grid_n);
    const auto r = grid.nodes();
    const int m = M.m;

    std::optional<double> tail;  // int_{R_max}^inf g^{1-m}
    if (M.warp.kind == WarpKind::euclidean) {
        if (m <= 2) {
            out.nonparabolic = false;
            out.tail_model = "closed-form (divergent)";
            return out;
        }
        out.tail_model = "closed-form";
        std::vector<double> G(r.size());
        for (std::size_t i = 0; i < r.size(); ++i)
            G[i] = std::pow(r[i], 2 - m) / (m - 2);
        tail = std::pow(M.r_max, 2 - m) / (m - 2);
        out.G = RadialFunction(r, G);
    } else if (M.warp.kind == WarpKind::hyperbolic && m == 3) {
        out.tail_model = "closed-form";
        const double s = std::sqrt(M.warp.curvature_k);
        // coth(sr) - 1 written as exp(-sr)/sinh(sr) to survive large radii
        auto coth_minus_one = [s](double rr) { return std::exp(-s * rr) / std::sinh(s * rr); };
        std::vector<double> G(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) G[i] = s * coth_minus_one(r[i]);
        tail = s * coth_minus_one(M.r_max);
        out.G = RadialFunction(r, G);
    } else {
        // numeric cumulative integral plus fitted tail
        std::vector<double> g(r.size()), integrand(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            g[i] = M.g(r[i]);
            integrand[i] = std::pow(g[i], 1 - m);
        }
        if (M.warp.kind == WarpKind::hyperbolic) {
            // exponential tail of sinh is exact enough beyond R_max
            const double s = std::sqrt(M.warp.curvature_k);
            double gR = M.g(M.r_max);
            out.tail_model = "exponential(" + std::to_string(s) + ")";
            tail = std::pow(gR, 1 - m) / ((m - 1) * s);
        } else {
            auto fit = detail::fit_tail(M, r, g);
            out.tail_model = fit.model;
            if (fit.convergent) tail = fit.integral;
        }
        if (!tail) {
            out.nonparabolic = false;
            return out;
        }
        std::vector<double> G(r.size());
        G.back() = *tail;
        for (std::size_t i = r.size() - 1; i-- > 0;) {
            double h = r[i + 1] - r[i];
            // Simpson on the cell using the midpoint value
            double mid = std::pow(M.g(0.5 * (r[i] + r[i + 1])), 1 - m);
            G[i] = G[i + 1] + h / 6.0 * (integrand[i] + 4.0 * mid + integrand[i + 1]);
        }
        out.G = RadialFunction(r, G);
    }

    out.tail_integral = *tail;
    out.nonparabolic = true;
    std::vector<double> tv(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(out.G.v[i] > 0)) throw numerical_error("green_kernel: nonpositive kernel value");
        tv[i] = -0.5 * std::log(out.G.v[i]);
    }
    out.t_of_r = RadialFunction(r, tv);
    for (std::size_t i = 1; i < tv.size(); ++i)
        if (!(tv[i] > tv[i - 1]))
            throw numerical_error("green_kernel: exhaustion parameter not increasing");
    return out;
}

struct SuperharmonicityReport {
    double max_excess = -infinity;  // max over nodes of Delta_h G minus the allowance
    bool holds = false;
    double worst_raw = -infinity;   // plain max of Delta_h G (diagnostic)
};

// Discrete check of Delta G <= 0.  The pointwise discrete Laplacian of a
// kernel with a pole carries truncation ~ h^2 G'''' that no feasible grid
// puts below 1e-6 near the singularity, so each node gets a Richardson
// allowance |Delta_{2h} G - Delta_h G| (about three times the local
// truncation).  A genuinely resolved positive Laplacian still fails.
inline SuperharmonicityReport green_superharmonic_check(const ModelManifold& M,
                                                        const GreenKernel& G) {
    const auto& r = G.G.r;
    const auto& v = G.G.v;
    const std::size_t N = r.size();
    if (N < 7) throw config_error("superharmonic check: too few kernel samples");
    const double h = r[1] - r[0];
    auto lap = [&](std::size_t i, std::size_t stride) {
        double hh = h * stride;
        double wl = std::pow(M.g(r[i] - 0.5 * hh), M.m - 1);
        double wr = std::pow(M.g(r[i] + 0.5 * hh), M.m - 1);
        double wc = std::pow(M.g(r[i]), M.m - 1);
        return (wr * (v[i + stride] - v[i]) - wl * (v[i] - v[i - stride])) / (hh * hh * wc);
    };
    SuperharmonicityReport rep;
    for (std::size_t i = 2; i + 2 < N; ++i) {
        double l1 = lap(i, 1);
        double allowance = std::fabs(lap(i, 2) - l1);
        rep.worst_raw = std::max(rep.worst_raw, l1);
        rep.max_excess = std::max(rep.max_excess, l1 - allowance);
    }
    rep.holds = rep.max_excess <= tol::green_superharmonic;
    return rep;
}

struct VolumeGrowthReport {
    bool finite = false;
    double liminf_estimate = 0.0;
    std::vector<double> radii;
    std::vector<double> ratio;  // log vol(B_r) / r^{2-mu}
    std::string note;
};

// Volume growth condition: liminf_{r->inf} log vol(B_r) / r^{2-mu} < inf.
// Closed-form warpings get the exact growth class; otherwise the verdict
// comes from the sampled ratio on a geometric radius sequence.
inline VolumeGrowthReport volume_growth_check(const ModelManifold& M, double mu,
                                              int grid_n = defaults::grid_n) {
    if (!(mu >= 0 && mu < 2)) throw config_error("volume growth: need mu in [0,2)");
    VolumeGrowthReport rep;
    const double omega = unit_sphere_area(M.m);
    RadialGrid grid(0.0, M.r_max, grid_n);
    // cumulative volume on the fine grid
    std::vector<double> vol(grid.size(), 0.0);
    for (int i = 1; i <= grid.n; ++i) {
        double a = grid.node(i - 1), b = grid.node(i);
        double mid = 0.5 * (a + b);
        vol[i] = vol[i - 1] + (b - a) / 6.0 *
                                  (M.weight(a) + 4.0 * M.weight(mid) + M.weight(b)) * omega;
    }
    // geometric sample radii
    double r0 = std::max(M.r_max / 256.0, grid.h() * 4);
    for (double r = r0; r <= M.r_max * (1 + 1e-12); r *= std::sqrt(2.0)) {
        int i = std::min(grid.n, static_cast<int>(std::floor(r / grid.h())));
        if (vol[i] <= 0) continue;
        rep.radii.push_back(grid.node(i));
        rep.ratio.push_back(std::log(vol[i]) / std::pow(grid.node(i), 2.0 - mu));
    }
    if (rep.ratio.size() < 4) throw numerical_error("volume growth: too few samples");
    std::size_t tail_start = rep.ratio.size() / 2;
    double tail_min = rep.ratio[tail_start];
    for (std::size_t i = tail_start; i < rep.ratio.size(); ++i)
        tail_min = std::min(tail_min, rep.ratio[i]);
    rep.liminf_estimate = tail_min;

    if (M.warp.kind == WarpKind::euclidean) {
        rep.finite = true;  // log vol ~ m log r, ratio -> 0
        rep.note = "closed-form: polynomial volume";
    } else if (M.warp.kind == WarpKind::hyperbolic) {
        // log vol ~ (m-1) sqrt(k) r, ratio ~ r^{mu-1}
        rep.finite = mu <= 1.0;
        rep.note = "closed-form: exponential volume";
    } else {
        // divergence heuristic: the tail ratio keeps increasing and at least
        // doubles across the sampled tail
        bool increasing = true;
        for (std::size_t i = tail_start + 1; i < rep.ratio.size(); ++i)
            if (rep.ratio[i] <= rep.ratio[i - 1]) increasing = false;
        bool doubled = rep.ratio.back() >= 2.0 * rep.ratio[tail_start];
        rep.finite = !(increasing && doubled);
        rep.note = "sampled-ratio heuristic";
    }
    return rep;
}

// Comparison warping from g'' = F g, g(0) = 0, g'(0) = 1 (the curvature
// bound taken with equality).  Errors out if g touches zero on (0, R_max].
inline WarpingFunction riccati_warping(const RadialFunction& F, double r_max,
                                       int grid_n = defaults::grid_n) {
    OdeDP45 ode(
        [&F](double r, const std::vector<double>& y, std::vector<double>& dy) {
            dy[0] = y[1];
            dy[1] = F(r) * y[0];
        },
        1e-11, 1e-13);
    RadialGrid grid(0.0, r_max, grid_n);
    std::vector<double> g(grid.size()), gp(grid.size());
    g[0] = 0.0;
    gp[0] = 1.0;
    std::vector<OdeDP45::Step> steps;
    ode.integrate(0.0, {0.0, 1.0}, r_max,
                  [&steps](const OdeDP45::Step& s) { steps.push_back(s); });
    std::size_t si = 0;
    for (int i = 1; i <= grid.n; ++i) {
        double r = grid.node(i);
        while (si + 1 < steps.size() && steps[si].t1 < r) ++si;
        g[i] = OdeDP45::dense_eval(steps[si], 0, std::min(r, steps[si].t1));
        gp[i] = OdeDP45::dense_eval(steps[si], 1, std::min(r, steps[si].t1));
        if (!(g[i] > 0))
            throw numerical_error("riccati_warping: comparison warping not positive at r=" +
                                  std::to_string(r));
    }
    return WarpingFunction::riccati(RadialFunction(grid.nodes(), g),
                                    RadialFunction(grid.nodes(), gp));
}

}  // namespace lichlab
