#include "hierstab/equilibrium.hpp"

#include <cmath>
#include <utility>

namespace hierstab {

namespace {

// trapezoid integral with the Euler-Maclaurin endpoint correction; the
// endpoint derivatives come from one-sided second-order differences
double integrate_corrected(const GridFunction& f) {
    const Grid& g = f.grid();
    const int n = g.n();
    const double h = g.h();
    const double d0 = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    const double dn = (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * h);
    return integrate(f) - h * h / 12.0 * (dn - d0);
}

}  // namespace

GridFunction survival(const ModelSpec& model, const GridFunction& Q) {
    const Grid g = Q.grid();
    std::vector<double> ratio(g.num_nodes());
    std::vector<double> gam(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) {
        const double s = g.node(i);
        gam[i] = model.gamma.eval(s, Q[i]);
        if (!(gam[i] > 0.0))
            throw ModelError("survival: gamma <= 0 at s=" + std::to_string(s));
        ratio[i] = model.mu.eval(s, Q[i]) / gam[i];
    }
    GridFunction cum = cumulative_integral(GridFunction(g, ratio), true);
    // Euler-Maclaurin endpoint correction lifts the exponent to O(h^4); the
    // trapezoid rule alone leaves an O(h^2) bias that survival amplifies.
    const double h = g.h();
    auto deriv = [&](int i) {
        if (i == 0) return (-3.0 * ratio[0] + 4.0 * ratio[1] - ratio[2]) / (2.0 * h);
        if (i == g.n())
            return (3.0 * ratio[i] - 4.0 * ratio[i - 1] + ratio[i - 2]) / (2.0 * h);
        return (ratio[i + 1] - ratio[i - 1]) / (2.0 * h);
    };
    const double d0 = deriv(0);
    std::vector<double> pi(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) {
        const double corrected = cum[i] - h * h / 12.0 * (deriv(i) - d0);
        pi[i] = gam[0] / gam[i] * std::exp(-corrected);
    }
    return GridFunction(g, std::move(pi));
}

double net_reproduction(const ModelSpec& model, const GridFunction& Q) {
    const Grid g = Q.grid();
    GridFunction pi = survival(model, Q);
    std::vector<double> f(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) f[i] = model.beta.eval(g.node(i), Q[i]) * pi[i];
    return integrate_corrected(GridFunction(g, std::move(f)));
}

std::pair<GridFunction, int> equilibrium_environment(const ModelSpec& model, double b) {
    const Grid g = model.grid();
    GridFunction w(g, [&](double s) { return model.w.eval(s, 0.0); });
    GridFunction Q = GridFunction::constant(g, 0.0);
    const double theta = model.solver.theta;
    for (int iter = 1; iter <= model.solver.fp_max_iter; ++iter) {
        GridFunction pi = survival(model, Q);
        for (int i = 0; i <= g.n(); ++i) pi[i] *= b;
        GridFunction target = environment(pi, model.alpha, w);
        double delta = 0.0, scale = 1.0;
        for (int i = 0; i <= g.n(); ++i) {
            const double next = (1.0 - theta) * Q[i] + theta * target[i];
            delta = std::max(delta, std::fabs(next - Q[i]));
            scale = std::max(scale, std::fabs(next));
            Q[i] = next;
        }
        if (delta <= model.solver.fp_tol * scale) return {std::move(Q), iter};
    }
    throw NonConvergence("equilibrium: inner fixed point on Q did not converge at b=" +
                             std::to_string(b), b);
}

namespace {

Equilibrium build_equilibrium(const ModelSpec& model, double b, GridFunction Q, int iters) {
    GridFunction u = survival(model, Q);
    for (int i = 0; i <= u.grid().n(); ++i) u[i] *= b;
    const double residual = b > 0.0 ? std::fabs(net_reproduction(model, Q) - 1.0) : 0.0;
    return Equilibrium{b, std::move(u), std::move(Q), residual, iters};
}

}  // namespace

Equilibrium equilibrium_at(const ModelSpec& model, double b) {
    auto [Q, iters] = equilibrium_environment(model, b);
    return build_equilibrium(model, b, std::move(Q), iters);
}

std::vector<Equilibrium> solve_equilibrium(const ModelSpec& model, double b_lo, double b_hi) {
    if (!(b_lo >= 0.0 && b_hi > b_lo))
        throw std::domain_error("solve_equilibrium: need 0 <= b_lo < b_hi");
    const Grid g = model.grid();
    std::vector<Equilibrium> out;
    out.push_back(Equilibrium{0.0, GridFunction::constant(g, 0.0),
                              GridFunction::constant(g, 0.0), 0.0, 0});

    auto F = [&](double b) { return net_reproduction(model, equilibrium_environment(model, b).first) - 1.0; };

    const int npts = model.solver.scan_points;
    double prev_b = b_lo, prev_F = F(b_lo);
    for (int k = 1; k <= npts; ++k) {
        const double cur_b = b_lo + (b_hi - b_lo) * k / npts;
        const double cur_F = F(cur_b);
        if (prev_F == 0.0 && prev_b > 0.0) {
            out.push_back(equilibrium_at(model, prev_b));
        } else if (prev_F * cur_F < 0.0) {
            double lo = prev_b, hi = cur_b, flo = prev_F;
            double mid = lo, fmid = flo;
            for (int it = 0; it < 200; ++it) {
                mid = 0.5 * (lo + hi);
                fmid = F(mid);
                // F can be nearly flat in b, so a small residual alone does not
                // pin b down -- require a tight bracket as well
                if (std::fabs(fmid) <= model.solver.bisect_tol &&
                    hi - lo <= 1e-12 * std::max(1.0, std::fabs(mid)))
                    break;
                if (flo * fmid <= 0.0) hi = mid;
                else lo = mid, flo = fmid;
            }
            if (mid > 0.0) out.push_back(equilibrium_at(model, mid));
        }
        prev_b = cur_b;
        prev_F = cur_F;
    }
    return out;
}

}  // namespace hierstab
