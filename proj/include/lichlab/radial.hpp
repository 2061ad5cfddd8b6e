#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "lichlab/common.hpp"

namespace lichlab {

// Uniform nodes r_0 = r_min <= ... <= r_n = r_max.  r_min = 0 for regular
// problems, r_min = eps > 0 for Green-singular ones.
struct RadialGrid {
    double r_min = 0.0;
    double r_max = 1.0;
    int n = defaults::grid_n;  // number of intervals; n+1 nodes

    RadialGrid() = default;
    RadialGrid(double rmin, double rmax, int intervals)
        : r_min(rmin), r_max(rmax), n(intervals) {
        if (!(r_max > r_min)) throw config_error("RadialGrid: r_max must exceed r_min");
        if (n < 8) throw config_error("RadialGrid: too few intervals");
    }

    double h() const { return (r_max - r_min) / n; }
    double node(int i) const { return r_min + i * h(); }
    int size() const { return n + 1; }

    std::vector<double> nodes() const {
        std::vector<double> r(size());
        for (int i = 0; i <= n; ++i) r[i] = node(i);
        return r;
    }
};

// Sampled radial function with linear interpolation between nodes.
struct RadialFunction {
    std::vector<double> r;
    std::vector<double> v;

    RadialFunction() = default;
    RadialFunction(std::vector<double> rr, std::vector<double> vv)
        : r(std::move(rr)), v(std::move(vv)) {
        if (r.size() != v.size() || r.size() < 2)
            throw config_error("RadialFunction: need matching samples, at least two");
        for (std::size_t i = 1; i < r.size(); ++i)
            if (!(r[i] > r[i - 1])) throw config_error("RadialFunction: nodes must increase");
    }

    bool empty() const { return r.empty(); }
    double front_r() const { return r.front(); }
    double back_r() const { return r.back(); }

    double operator()(double x) const {
        if (empty()) throw numerical_error("RadialFunction: empty");
        if (x <= r.front()) return v.front();
        if (x >= r.back()) return v.back();
        auto it = std::upper_bound(r.begin(), r.end(), x);
        std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
        double w = (x - r[i]) / (r[i + 1] - r[i]);
        return (1.0 - w) * v[i] + w * v[i + 1];
    }

    double max_value() const {
        double m = v.front();
        for (double x : v) m = std::max(m, x);
        return m;
    }
    double min_value() const {
        double m = v.front();
        for (double x : v) m = std::min(m, x);
        return m;
    }

    // Restriction to nodes with r <= cutoff (at least two nodes kept).
    RadialFunction restrict_to(double cutoff) const {
        std::vector<double> rr, vv;
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i] <= cutoff + 1e-14 * std::max(1.0, cutoff)) {
                rr.push_back(r[i]);
                vv.push_back(v[i]);
            }
        if (rr.size() < 2) throw numerical_error("RadialFunction: restriction too small");
        return RadialFunction(std::move(rr), std::move(vv));
    }
};

inline RadialFunction constant_function(const RadialGrid& grid, double value) {
    return RadialFunction(grid.nodes(), std::vector<double>(grid.size(), value));
}

// Composite trapezoid on arbitrary increasing nodes.
inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

}  // namespace lichlab
