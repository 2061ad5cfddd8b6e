#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lichlab {

// Error taxonomy mirrored by the CLI exit codes:
//   config_error -> 4, hypothesis_error -> 2, numerical_error -> 3.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct hypothesis_error : std::runtime_error {
    explicit hypothesis_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

namespace tol {
// Nonlinear solver stopping rules.
inline constexpr double step = 1e-10;
inline constexpr double residual = 1e-8;
// Ordering comparisons between certified functions.
inline constexpr double compare = 1e-10;
// Discrete residual slack accepted on barrier certificates.
inline constexpr double barrier = 1e-7;
// Relative agreement between an eigenvalue and its discrete Rayleigh quotient.
inline constexpr double rayleigh_rel = 1e-6;
// One-sided slack on superharmonicity of generated Green kernels.
inline constexpr double green_superharmonic = 1e-6;
// One-sided slack on asymptotic barrier residuals.
inline constexpr double barrier_envelope = 1e-6;
// Interior stabilization threshold between boundary doublings.
inline constexpr double blowup_core = 1e-6;
}  // namespace tol

namespace defaults {
inline constexpr int grid_n = 2000;
// Green-singular grids start at eps_rel * R instead of 0.
inline constexpr double green_eps_rel = 1e-3;
inline constexpr int max_monotone_iterations = 100000;
inline constexpr int max_boundary_doublings = 40;
}  // namespace defaults

inline constexpr double infinity = std::numeric_limits<double>::infinity();

inline bool is_finite(double x) { return std::isfinite(x); }

// Positive/negative parts: x = pos(x) - neg(x), both >= 0.
inline double positive_part(double x) { return x > 0 ? x : 0.0; }
inline double negative_part(double x) { return x < 0 ? -x : 0.0; }

// Area of the unit (m-1)-sphere, omega_{m-1} = 2 pi^{m/2} / Gamma(m/2),
// with Gamma evaluated by the half-integer recurrence.
inline double unit_sphere_area(int m) {
    if (m < 2) throw config_error("unit_sphere_area: dimension must be >= 2");
    const double pi = 3.14159265358979323846;
    double gamma_half_m;  // Gamma(m/2)
    if (m % 2 == 0) {
        gamma_half_m = 1.0;  // Gamma(1) = 1
        for (int j = 1; j < m / 2; ++j) gamma_half_m *= j;
    } else {
        gamma_half_m = std::sqrt(pi);  // Gamma(1/2)
        for (int j = 0; j < (m - 1) / 2; ++j) gamma_half_m *= (j + 0.5);
    }
    return 2.0 * std::pow(pi, 0.5 * m) / gamma_half_m;
}

}  // namespace lichlab
