#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "lichlab/common.hpp"

namespace lichlab {

// Adaptive Dormand-Prince 5(4) for small systems.  Accepted steps are
// reported to an observer together with the stage data needed for quartic
// dense output, which is what the zero-counting and grid-evaluation code
// builds on.
class OdeDP45 {
  public:
    using Rhs = std::function<void(double t, const std::vector<double>& y,
                                   std::vector<double>& dydt)>;

    struct Step {
        double t0 = 0, t1 = 0;
        std::vector<double> y0, y1;
        // Contribution vectors for the dense-output polynomial.
        std::array<std::vector<double>, 7> k;
    };

    OdeDP45(Rhs rhs, double rtol, double atol) : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {}

    // Integrate from (t0, y0) to t1 (t1 > t0).  The observer, when given,
    // is called once per accepted step.
    std::vector<double> integrate(double t0, std::vector<double> y, double t1,
                                  const std::function<void(const Step&)>& observer = nullptr) {
        const std::size_t dim = y.size();
        double t = t0;
        std::vector<double> dydt(dim), ynew(dim), yerr(dim);
        Step step;
        for (auto& kv : step.k) kv.resize(dim);
        rhs_(t, y, step.k[0]);  // FSAL seed
        double h = initial_step(t, y, step.k[0], t1 - t0);
        std::size_t accepted = 0, attempts = 0;
        while (t < t1) {
            if (++attempts > 100000000) throw numerical_error("ode: step budget exhausted");
            if (t + h > t1) h = t1 - t;
            if (!(h > 0) || t + h == t)
                throw numerical_error("ode: step size underflow at t=" + std::to_string(t));
            double err = try_step(t, y, h, step, ynew, yerr);
            if (err <= 1.0) {
                step.t0 = t;
                step.t1 = t + h;
                step.y0 = y;
                step.y1 = ynew;
                if (observer) observer(step);
                t += h;
                y = ynew;
                step.k[0] = step.k[6];  // FSAL
                ++accepted;
            }
            double f = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            h *= std::min(5.0, std::max(0.2, f));
        }
        (void)accepted;
        return y;
    }

    // Quartic dense output on an accepted step (standard DP45 interpolant).
    static double dense_eval(const Step& s, int comp, double t) {
        const double h = s.t1 - s.t0;
        const double th = (t - s.t0) / h;
        // Shampine's continuous extension coefficients.
        static const double d1 = -12715105075.0 / 11282082432.0;
        static const double d3 = 87487479700.0 / 32700410799.0;
        static const double d4 = -10690763975.0 / 1880347072.0;
        static const double d5 = 701980252875.0 / 199316789632.0;
        static const double d6 = -1453857185.0 / 822651844.0;
        static const double d7 = 69997945.0 / 29380423.0;
        const double y0 = s.y0[comp], y1 = s.y1[comp];
        const double k1 = s.k[0][comp], k3 = s.k[2][comp], k4 = s.k[3][comp];
        const double k5 = s.k[4][comp], k6 = s.k[5][comp], k7 = s.k[6][comp];
        const double rcont1 = y0;
        const double rcont2 = y1 - y0;
        const double rcont3 = h * k1 - rcont2;
        const double rcont4 = rcont2 - h * k7 - rcont3;
        const double rcont5 =
            h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        return rcont1 + th * (rcont2 + (1.0 - th) * (rcont3 + th * (rcont4 + (1.0 - th) * rcont5)));
    }

    // Derivative of the dense interpolant (for reporting y' between nodes).
    static double dense_eval_deriv(const Step& s, int comp, double t) {
        const double h = s.t1 - s.t0;
        const double eps = 1e-6 * h;
        double tm = std::max(s.t0, t - eps), tp = std::min(s.t1, t + eps);
        return (dense_eval(s, comp, tp) - dense_eval(s, comp, tm)) / (tp - tm);
    }

  private:
    double initial_step(double t, const std::vector<double>& y, const std::vector<double>& f0,
                        double span) const {
        double dny = 0, dnf = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double sk = atol_ + rtol_ * std::fabs(y[i]);
            dny += (y[i] / sk) * (y[i] / sk);
            dnf += (f0[i] / sk) * (f0[i] / sk);
        }
        double h = (dnf > 1e-14 && dny > 1e-14) ? 0.01 * std::sqrt(dny / dnf) : 1e-6 * span;
        (void)t;
        return std::min(h, 0.1 * span);
    }

    // One RK attempt; returns the scaled error norm.
    double try_step(double t, const std::vector<double>& y, double h, Step& step,
                    std::vector<double>& ynew, std::vector<double>& yerr) {
        static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static const double a21 = 1.0 / 5;
        static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
        static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        const std::size_t dim = y.size();
        std::vector<double> tmp(dim);
        auto& k = step.k;
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * a21 * k[0][i];
        rhs_(t + c2 * h, tmp, k[1]);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
        rhs_(t + c3 * h, tmp, k[2]);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
        rhs_(t + c4 * h, tmp, k[3]);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
        rhs_(t + c5 * h, tmp, k[4]);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                                 a65 * k[4][i]);
        rhs_(t + h, tmp, k[5]);
        for (std::size_t i = 0; i < dim; ++i)
            ynew[i] = y[i] +
                      h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
        rhs_(t + h, ynew, k[6]);
        double norm = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            yerr[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                           e6 * k[5][i] + e7 * k[6][i]);
            double sk = atol_ + rtol_ * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            norm += (yerr[i] / sk) * (yerr[i] / sk);
        }
        return std::sqrt(norm / dim);
    }

    Rhs rhs_;
    double rtol_, atol_;
};

// Count sign changes of component `comp` along the accepted steps, refining
// each bracketing interval on the dense interpolant by bisection.
struct ZeroCounter {
    int comp = 0;
    int count = 0;
    std::vector<double> zeros;
    double last_value = 0;
    bool have_last = false;

    void observe(const OdeDP45::Step& s) {
        // subsample each step so closely spaced zeros are not missed
        const int sub = 8;
        double prev_t = s.t0;
        double prev_v = have_last ? last_value : OdeDP45::dense_eval(s, comp, s.t0);
        for (int j = 1; j <= sub; ++j) {
            double t = s.t0 + (s.t1 - s.t0) * j / sub;
            double v = OdeDP45::dense_eval(s, comp, t);
            if ((prev_v < 0 && v > 0) || (prev_v > 0 && v < 0)) {
                double lo = prev_t, hi = t, vlo = prev_v;
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (lo + hi);
                    double vm = OdeDP45::dense_eval(s, comp, mid);
                    if ((vlo < 0) == (vm < 0)) {
                        lo = mid;
                        vlo = vm;
                    } else {
                        hi = mid;
                    }
                    if (hi - lo < 1e-12 * std::max(1.0, std::fabs(hi))) break;
                }
                zeros.push_back(0.5 * (lo + hi));
                ++count;
            } else if (v == 0.0 && prev_v != 0.0) {
                zeros.push_back(t);
                ++count;
            }
            prev_t = t;
            prev_v = v;
        }
        last_value = prev_v;
        have_last = true;
    }
};

}  // namespace lichlab
