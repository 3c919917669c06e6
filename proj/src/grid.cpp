#include "hierstab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace hierstab {

Grid::Grid(double m, int n) : m_(m), n_(n) {
    if (!(m > 0.0) || !std::isfinite(m))
        throw ModelError("Grid: maximum size m must be positive and finite");
    if (n < 8 || n % 2 != 0)
        throw ModelError("Grid: cell count n must be even and >= 8");
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.num_nodes())
        throw ModelError("GridFunction: value count does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw ModelError("GridFunction: non-finite node value");
}

GridFunction::GridFunction(Grid grid, const std::function<double(double)>& f) : grid_(grid) {
    values_.resize(grid_.num_nodes());
    for (int i = 0; i <= grid_.n(); ++i) values_[i] = f(grid_.node(i));
    for (double v : values_)
        if (!std::isfinite(v)) throw ModelError("GridFunction: non-finite node value");
}

GridFunction GridFunction::constant(Grid grid, double value) {
    return GridFunction(grid, std::vector<double>(grid.num_nodes(), value));
}

double GridFunction::operator()(double s) const {
    const double m = grid_.m();
    if (!(s >= 0.0 && s <= m))
        throw std::domain_error("GridFunction: evaluation outside [0, m]");
    const double x = s / grid_.h();
    int i = static_cast<int>(x);
    if (i >= grid_.n()) return values_.back();
    const double frac = x - i;
    return values_[i] + frac * (values_[i + 1] - values_[i]);
}

double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }
double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }

double GridFunction::max_abs() const {
    double r = 0.0;
    for (double v : values_) r = std::max(r, std::fabs(v));
    return r;
}

double integrate(const GridFunction& f, double a, double b) {
    const Grid& g = f.grid();
    if (!(a >= 0.0 && b >= a && b <= g.m()))
        throw std::domain_error("integrate: bounds must satisfy 0 <= a <= b <= m");
    const double h = g.h();
    int ia = static_cast<int>(std::ceil(a / h - 1e-12));
    int ib = static_cast<int>(std::floor(b / h + 1e-12));
    ia = std::clamp(ia, 0, g.n());
    ib = std::clamp(ib, 0, g.n());
    if (ia > ib) {
        // both bounds inside one cell
        return 0.5 * (f(a) + f(b)) * (b - a);
    }
    double sum = 0.0;
    for (int i = ia; i < ib; ++i) sum += 0.5 * (f[i] + f[i + 1]) * h;
    const double sa = g.node(ia), sb = g.node(ib);
    if (a < sa) sum += 0.5 * (f(a) + f[ia]) * (sa - a);
    if (b > sb) sum += 0.5 * (f[ib] + f(b)) * (b - sb);
    return sum;
}

double integrate(const GridFunction& f) { return integrate(f, 0.0, f.grid().m()); }

GridFunction cumulative_integral(const GridFunction& f, bool from_zero) {
    const Grid& g = f.grid();
    const double h = g.h();
    std::vector<double> up(g.num_nodes());
    up[0] = 0.0;
    for (int i = 1; i <= g.n(); ++i) up[i] = up[i - 1] + 0.5 * (f[i - 1] + f[i]) * h;
    if (from_zero) return GridFunction(g, std::move(up));
    // complement against the total so that int_0^s + int_s^m == int_0^m exactly
    const double total = up.back();
    std::vector<double> down(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) down[i] = total - up[i];
    down[g.n()] = 0.0;
    return GridFunction(g, std::move(down));
}

GridFunction environment(const GridFunction& u, double alpha, const GridFunction& w) {
    if (u.grid() != w.grid()) throw std::domain_error("environment: grid mismatch between u and w");
    const Grid& g = u.grid();
    std::vector<double> wu(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) wu[i] = w[i] * u[i];
    GridFunction f(g, std::move(wu));
    GridFunction up = cumulative_integral(f, true);
    GridFunction down = cumulative_integral(f, false);
    std::vector<double> q(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) q[i] = alpha * up[i] + down[i];
    return GridFunction(g, std::move(q));
}

}  // namespace hierstab
