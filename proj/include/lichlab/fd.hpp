#pragma once

#include <cmath>
#include <vector>

#include "lichlab/common.hpp"
#include "lichlab/model.hpp"
#include "lichlab/radial.hpp"

namespace lichlab {

// Finite-volume discretization of the radial Laplacian in Liouville form,
// (g^{m-1} u')' / g^{m-1}.  Face weights are g^{m-1} at cell faces, cell
// volumes are Simpson integrals of g^{m-1} over the dual cells.  With a
// symmetry left end (grid starting at r = 0) the first row reduces to the
// removable-singularity stencil Delta u(0) = m u''(0).
struct RadialOperator {
    RadialGrid grid;
    bool left_symmetry = true;        // false: left end is a Dirichlet boundary
    std::vector<double> face;         // face[i] = g(r_{i+1/2})^{m-1}, i = 0..n-1
    std::vector<double> vol;          // dual-cell volumes, i = 0..n

    RadialOperator(const ModelManifold& M, RadialGrid g, bool symmetric_left)
        : grid(g), left_symmetry(symmetric_left) {
        const int n = grid.n;
        const double h = grid.h();
        face.resize(n);
        vol.assign(n + 1, 0.0);
        auto w = [&M](double r) { return M.weight(r); };
        for (int i = 0; i < n; ++i) face[i] = w(grid.node(i) + 0.5 * h);
        for (int i = 0; i <= n; ++i) {
            double lo = std::max(grid.r_min, grid.node(i) - 0.5 * h);
            double hi = std::min(grid.r_max, grid.node(i) + 0.5 * h);
            double mid = 0.5 * (lo + hi);
            vol[i] = (hi - lo) / 6.0 * (w(lo) + 4.0 * w(mid) + w(hi));
            if (!(vol[i] > 0)) throw numerical_error("radial operator: nonpositive cell volume");
        }
    }

    int first_unknown() const { return left_symmetry ? 0 : 1; }
    int last_unknown() const { return grid.n - 1; }
    int unknowns() const { return last_unknown() - first_unknown() + 1; }

    // Discrete Laplacian at node i (valid for first_unknown()..last_unknown()).
    double laplacian(const std::vector<double>& u, int i) const {
        const double h = grid.h();
        double flux_r = face[i] * (u[i + 1] - u[i]);
        double flux_l = (i == 0) ? 0.0 : face[i - 1] * (u[i] - u[i - 1]);
        return (flux_r - flux_l) / (h * vol[i]);
    }

    // Symmetric tridiagonal representation of -Delta - diag(pot) over the
    // unknown nodes (volume-weighted symmetrization).
    void symmetric_tridiagonal(const std::vector<double>& pot, std::vector<double>& diag,
                               std::vector<double>& off) const {
        const double h = grid.h();
        const int i0 = first_unknown();
        const int N = unknowns();
        diag.assign(N, 0.0);
        off.assign(N > 1 ? N - 1 : 0, 0.0);
        for (int j = 0; j < N; ++j) {
            int i = i0 + j;
            double fl = (i == 0) ? 0.0 : face[i - 1];
            double fr = face[i];
            diag[j] = (fl + fr) / (h * vol[i]) - pot[i];
            if (j + 1 < N) off[j] = -face[i] / (h * std::sqrt(vol[i] * vol[i + 1]));
        }
    }
};

// Thomas algorithm for strictly diagonally dominant tridiagonal systems.
inline std::vector<double> solve_tridiagonal(std::vector<double> a, std::vector<double> b,
                                             std::vector<double> c, std::vector<double> d) {
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        d[i] -= m * d[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
    return x;
}

// Tridiagonal LU with partial pivoting (for possibly indefinite or nearly
// singular shifts in inverse iteration).
class TridiagonalLU {
  public:
    TridiagonalLU(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
        : n_(diag.size()), dl_(std::move(lower)), d_(std::move(diag)), du_(std::move(upper)),
          du2_(n_ > 2 ? n_ - 2 : 0, 0.0), piv_(n_, 0) {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (std::fabs(d_[i]) >= std::fabs(dl_[i])) {
                piv_[i] = 0;
                if (d_[i] == 0.0) d_[i] = 1e-300;
                double fact = dl_[i] / d_[i];
                dl_[i] = fact;
                d_[i + 1] -= fact * du_[i];
            } else {
                piv_[i] = 1;
                double fact = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = fact;
                double tmp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = tmp - fact * d_[i + 1];
                if (i + 2 < n_) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fact * du_[i + 1];
                }
            }
        }
        if (d_[n_ - 1] == 0.0) d_[n_ - 1] = 1e-300;
    }

    std::vector<double> solve(std::vector<double> b) const {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (piv_[i] == 0) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                double tmp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tmp - dl_[i] * b[i];
            }
        }
        b[n_ - 1] /= d_[n_ - 1];
        if (n_ >= 2) {
            std::size_t i = n_ - 2;
            while (true) {
                double val = b[i] - du_[i] * b[i + 1];
                if (i + 2 < n_) val -= du2_[i] * b[i + 2];
                b[i] = val / d_[i];
                if (i == 0) break;
                --i;
            }
        }
        return b;
    }

  private:
    std::size_t n_;
    std::vector<double> dl_, d_, du_, du2_;
    std::vector<int> piv_;
};

// Number of eigenvalues of the symmetric tridiagonal (diag, off) strictly
// below x, by the Sturm sequence of LDL^T pivots.
inline int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
    int count = 0;
    double q = diag[0] - x;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        if (q == 0.0) q = 1e-300;
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if (q < 0) ++count;
    }
    return count;
}

// Smallest eigenvalue by Sturm bisection.
inline double smallest_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off) {
    double lo = diag[0], hi = diag[0];
    for (std::size_t i = 0; i < diag.size(); ++i) {
        double radius = (i > 0 ? std::fabs(off[i - 1]) : 0.0) +
                        (i < off.size() ? std::fabs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (sturm_count(diag, off, mid) >= 1) hi = mid;
        else lo = mid;
        if (hi - lo < 1e-14 * std::max(1.0, std::fabs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

// Eigenvector for an isolated eigenvalue by shifted inverse iteration.
inline std::vector<double> inverse_iteration(const std::vector<double>& diag,
                                             const std::vector<double>& off, double lambda) {
    const std::size_t N = diag.size();
    double scale = 0.0;
    for (double d : diag) scale = std::max(scale, std::fabs(d));
    double shift = lambda - 1e-11 * std::max(1.0, scale);
    std::vector<double> d(N), lowr(off), up(off);
    for (std::size_t i = 0; i < N; ++i) d[i] = diag[i] - shift;
    TridiagonalLU lu(lowr, d, up);
    std::vector<double> y(N, 1.0);
    for (int it = 0; it < 8; ++it) {
        y = lu.solve(std::move(y));
        double norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 0) || !std::isfinite(norm))
            throw numerical_error("inverse iteration failed");
        for (double& v : y) v /= norm;
    }
    return y;
}

}  // namespace lichlab
