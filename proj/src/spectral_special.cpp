#include "hierstab/spectral_special.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hierstab/conditions.hpp"

namespace hierstab {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "Stable";
        case Verdict::Unstable: return "Unstable";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

void require_special(const LinearizedCoefficients& c) {
    if (!c.sigma_vanishes())
        throw WrongRegime("explicit characteristic function requires sigma* == 0 "
                          "(max|sigma*| = " + std::to_string(c.sigma_star.max_abs()) + ")");
}

// int_0^s mu*/gamma* at the nodes, shared by all Pi evaluations
GridFunction mu_over_gamma_cum(const LinearizedCoefficients& c) {
    const Grid& g = c.grid();
    std::vector<double> f(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) f[i] = c.mu_star[i] / c.gamma_star[i];
    return cumulative_integral(GridFunction(g, std::move(f)), true);
}

}  // namespace

GridFunction capital_pi(const LinearizedCoefficients& c, double lambda) {
    require_special(c);
    const Grid& g = c.grid();
    GridFunction cum = mu_over_gamma_cum(c);
    std::vector<double> pi(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i)
        pi[i] = c.gamma_star[0] / c.gamma_star[i] * std::exp(-cum[i] - lambda * c.Gamma[i]);
    return GridFunction(g, std::move(pi));
}

double capital_pi(const LinearizedCoefficients& c, double lambda, double s) {
    require_special(c);
    GridFunction cum = mu_over_gamma_cum(c);
    return c.gamma_star[0] / c.gamma_star(s) * std::exp(-cum(s) - lambda * c.Gamma(s));
}

double K(const LinearizedCoefficients& c, double lambda) {
    require_special(c);
    const Grid& g = c.grid();
    GridFunction Pi = capital_pi(c, lambda);
    std::vector<double> wPi(g.num_nodes()), f1(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) {
        wPi[i] = c.w[i] * Pi[i];
        f1[i] = c.beta_star[i] * Pi[i];
    }
    GridFunction wPi_f(g, std::move(wPi));
    GridFunction inner = cumulative_integral(wPi_f, true);
    std::vector<double> f2(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) f2[i] = c.betaQ_u[i] * inner[i];
    const double t1 = integrate(GridFunction(g, std::move(f1)));
    const double t2 = (c.alpha - 1.0) * integrate(GridFunction(g, std::move(f2)));
    const double t3 = integrate(c.betaQ_u) * integrate(wPi_f);
    return t1 + t2 + t3;
}

double K_prime(const LinearizedCoefficients& c, double lambda) {
    require_special(c);
    const Grid& g = c.grid();
    GridFunction Pi = capital_pi(c, lambda);
    GridFunction up = cumulative_integral(c.betaQ_u, true);
    GridFunction down = cumulative_integral(c.betaQ_u, false);
    std::vector<double> f(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) {
        const double bracket = c.beta_star[i] + c.w[i] * up[i] + c.alpha * c.w[i] * down[i];
        f[i] = Pi[i] * c.Gamma[i] * bracket;
    }
    return -integrate(GridFunction(g, std::move(f)));
}

std::optional<double> dominant_root(const LinearizedCoefficients& c, double lo, double hi) {
    require_special(c);
    if (!(hi > lo)) throw std::domain_error("dominant_root: need lo < hi");
    constexpr int kScan = 256;
    std::vector<double> val(kScan + 1);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k <= kScan; ++k)
        val[k] = K(c, lo + (hi - lo) * k / kScan) - 1.0;
    for (int k = kScan; k >= 1; --k) {
        double a = lo + (hi - lo) * (k - 1) / kScan;
        double b = lo + (hi - lo) * k / kScan;
        double fa = val[k - 1], fb = val[k];
        if (fb == 0.0) return b;
        if (fa * fb >= 0.0) continue;
        while (b - a > 1e-10) {
            const double mid = 0.5 * (a + b);
            const double fm = K(c, mid) - 1.0;
            if (fm == 0.0) return mid;
            if (fa * fm < 0.0) b = mid, fb = fm;
            else a = mid, fa = fm;
        }
        return 0.5 * (a + b);
    }
    if (val[0] == 0.0) return lo;
    return std::nullopt;
}

std::pair<double, double> default_root_window(const LinearizedCoefficients& c) {
    double decay = 0.0;
    for (int i = 0; i <= c.grid().n(); ++i)
        decay = std::max(decay, c.mu_star[i] / c.gamma_star[i]);
    return {-3.0 * decay - 10.0, 10.0};
}

StabilityVerdict classify_special(const LinearizedCoefficients& c) {
    require_special(c);
    const Grid& g = c.grid();
    bool all_le = true, all_ge = true, all_zero = true;
    for (int i = 0; i <= g.n(); ++i) {
        const double bq = c.betaQ_eq[i];
        all_le = all_le && bq <= 0.0;
        all_ge = all_ge && bq >= 0.0;
        all_zero = all_zero && bq == 0.0;
    }

    StabilityVerdict out;
    auto [lo, hi] = default_root_window(c);
    if (auto root = dominant_root(c, lo, hi)) out.evidence["dominant_root"] = *root;
    out.evidence["K0"] = K(c, 0.0);

    if (all_le && !all_zero) {
        auto [rep1, rep2] = check_positivity(c);
        out.evidence["positivity_margin"] = rep2.margin;
        if (rep1.holds && rep2.holds) {
            out.verdict = Verdict::Stable;
            out.criterion = "decreasing fertility with positive semigroup";
            return out;
        }
        out.verdict = Verdict::Inconclusive;
        out.criterion = "decreasing fertility but positivity fails";
        return out;
    }
    if (all_ge && !all_zero) {
        out.verdict = Verdict::Unstable;
        out.criterion = "increasing fertility";
        return out;
    }
    out.verdict = Verdict::Inconclusive;
    out.criterion = "fertility response changes sign";
    return out;
}

}  // namespace hierstab
