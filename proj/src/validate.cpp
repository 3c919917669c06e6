#include "hierstab/validate.hpp"

#include <cmath>

namespace hierstab {

namespace {

int sign_with_tol(double x, double tol) { return x > tol ? 1 : x < -tol ? -1 : 0; }

}  // namespace

std::vector<ValidationResult> validate_model(const ModelSpec& model, const ValidateOptions& opts) {
    std::vector<Equilibrium> eqs;
    if (opts.force_b) {
        eqs.push_back(equilibrium_at(model, *opts.force_b));
    } else {
        eqs = solve_equilibrium(model, opts.b_lo, opts.b_hi);
    }

    std::vector<ValidationResult> results;
    for (auto& eq : eqs) {
        if (!eq.positive() && !opts.force_b) continue;  // routes below target the positive states
        ValidationResult res{eq, {}, false, true};
        LinearizedCoefficients c = linearize(model, eq);

        if (c.sigma_vanishes()) {
            RouteResult r{"characteristic_function", {}, {}, ""};
            auto [lo, hi] = default_root_window(c);
            if (auto root = dominant_root(c, lo, hi)) {
                r.growth_rate = *root;
                r.detail = "dominant real root of K";
            } else {
                r.detail = "no real root of K in the search window";
            }
            StabilityVerdict v = classify_special(c);
            if (v.verdict == Verdict::Stable) r.stable = true;
            if (v.verdict == Verdict::Unstable) r.stable = false;
            r.detail += std::string("; classification: ") + to_string(v.verdict);
            res.routes.push_back(std::move(r));
        }

        {
            RouteResult r{"characteristic_determinant", {}, {}, ""};
            try {
                SpectrumReport rep = find_roots(c, opts.rect);
                if (!rep.roots.empty()) {
                    r.growth_rate = rep.spectral_bound_estimate;
                    r.detail = "spectral bound over " + std::to_string(rep.roots.size()) + " root(s)";
                } else {
                    r.detail = "no eigenvalues in the search rectangle";
                }
            } catch (const std::exception& e) {
                r.detail = std::string("root search failed: ") + e.what();
            }
            res.routes.push_back(std::move(r));
        }

        {
            ConditionReport diss = check_dissipativity(c);
            RouteResult r{"dissipativity", {}, {}, ""};
            if (diss.holds) {
                r.stable = true;
                r.detail = "contraction with kappa_max=" + std::to_string(diss.margin);
            } else {
                r.detail = "criterion fails (margin " + std::to_string(diss.margin) + "), no verdict";
            }
            res.routes.push_back(std::move(r));
            res.alarm = consistency_alarm(c);
        }

        if (opts.sim_T > 0.0 && eq.positive()) {
            RouteResult r{"simulation", {}, {}, ""};
            const Grid& g = eq.u_star.grid();
            GridFunction v0(g, [&](double s) { return std::sin(M_PI * s / g.m()); });
            double eps = opts.sim_eps;
            if (eps <= 0.0) eps = 1e-4 * integrate(eq.u_star);
            try {
                RateMeasurement m = measure_rate(model, eq, v0, eps, opts.sim_T);
                r.growth_rate = m.rate;
                r.detail = "perturbation decay fit over [" + std::to_string(m.fit_t_lo) + ", " +
                           std::to_string(m.fit_t_hi) + "]";
            } catch (const std::exception& e) {
                r.detail = std::string("simulation failed: ") + e.what();
            }
            res.routes.push_back(std::move(r));
        }

        // sign agreement across routes
        int pos = 0, neg = 0;
        for (const auto& r : res.routes) {
            int s = 0;
            if (r.growth_rate) s = sign_with_tol(*r.growth_rate, opts.sign_tol);
            else if (r.stable) s = -1;       // hard Stable verdict without a rate
            else if (r.stable.has_value()) s = 1;
            if (s > 0) ++pos;
            if (s < 0) ++neg;
        }
        res.agree = !(pos > 0 && neg > 0);
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace hierstab
