#pragma once

#include <functional>
#include <vector>

#include "hierstab/errors.hpp"

namespace hierstab {

/// Uniform grid of n cells on [0, m]; node i sits at i*m/n.
class Grid {
public:
    Grid(double m, int n);

    double m() const { return m_; }
    int n() const { return n_; }
    double h() const { return m_ / n_; }
    double node(int i) const { return i * m_ / n_; }
    int num_nodes() const { return n_ + 1; }

    bool operator==(const Grid& other) const { return m_ == other.m_ && n_ == other.n_; }
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    double m_;
    int n_;
};

/// Real-valued function sampled at the grid nodes, linearly interpolated in between.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values);
    GridFunction(Grid grid, const std::function<double(double)>& f);
    static GridFunction constant(Grid grid, double value);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](int i) const { return values_[i]; }
    double& operator[](int i) { return values_[i]; }

    /// Linear interpolation; s outside [0, m] is a domain error.
    double operator()(double s) const;

    double max() const;
    double min() const;
    double max_abs() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Composite trapezoid value of the integral of f over [a, b] (subset of [0, m]).
/// Exact for piecewise-linear integrands aligned with the nodes.
double integrate(const GridFunction& f, double a, double b);
double integrate(const GridFunction& f);

/// Node k holds the trapezoid value of the integral of f over [0, node_k]
/// (from_zero), or over [node_k, m] otherwise. The two variants are
/// complements: their node-wise sum equals integrate(f) up to a final rounding.
GridFunction cumulative_integral(const GridFunction& f, bool from_zero);

/// The hierarchy environment Q(s) = alpha*int_0^s w*u + int_s^m w*u.
GridFunction environment(const GridFunction& u, double alpha, const GridFunction& w);

}  // namespace hierstab
