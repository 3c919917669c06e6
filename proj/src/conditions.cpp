#include "hierstab/conditions.hpp"

#include <cmath>

#include "hierstab/equilibrium.hpp"

namespace hierstab {

namespace {

ConditionReport from_slack(GridFunction slack, bool strict) {
    const Grid& g = slack.grid();
    double margin = slack[0];
    double worst = g.node(0);
    for (int i = 1; i <= g.n(); ++i) {
        if (slack[i] < margin) {
            margin = slack[i];
            worst = g.node(i);
        }
    }
    ConditionReport rep{strict ? margin > 0.0 : margin >= 0.0, margin, worst, std::move(slack), {}};
    return rep;
}

}  // namespace

std::pair<ConditionReport, ConditionReport> check_positivity(const LinearizedCoefficients& c) {
    const Grid& g = c.grid();
    std::vector<double> s1(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) s1[i] = -c.sigma_star[i];

    GridFunction up = cumulative_integral(c.betaQ_u, true);
    GridFunction down = cumulative_integral(c.betaQ_u, false);
    std::vector<double> s2(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i)
        s2[i] = c.beta_star[i] + c.w[i] * (up[i] + c.alpha * down[i]);

    return {from_slack(GridFunction(g, std::move(s1)), false),
            from_slack(GridFunction(g, std::move(s2)), false)};
}

ConditionReport check_dissipativity(const LinearizedCoefficients& c) {
    const Grid& g = c.grid();
    GridFunction up = cumulative_integral(c.betaQ_u, true);
    GridFunction down = cumulative_integral(c.betaQ_u, false);
    const double gamma0 = c.gamma_star[0];
    std::vector<double> slack(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) {
        const double bracket = c.beta_star[i] + c.alpha * c.w[i] * down[i] + c.w[i] * up[i];
        slack[i] = c.mu_star[i] -
                   c.w[i] * ((1.0 - c.alpha) * c.gammaQ_star[i] * c.u_star[i] + c.sigma_star_l1) -
                   gamma0 * std::fabs(bracket);
    }
    ConditionReport rep = from_slack(GridFunction(g, std::move(slack)), true);
    if (rep.holds) rep.aux["kappa_max"] = rep.margin;
    return rep;
}

ConditionReport check_trivial(const ModelSpec& model) {
    const Grid g = model.grid();
    const double gamma00 = model.gamma.eval(0.0, 0.0);
    std::vector<double> slack(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) {
        const double s = g.node(i);
        slack[i] = model.mu.eval(s, 0.0) - gamma00 * model.beta.eval(s, 0.0);
    }
    ConditionReport rep = from_slack(GridFunction(g, std::move(slack)), true);
    if (rep.holds) rep.aux["kappa_max"] = rep.margin;
    rep.aux["R0"] = net_reproduction(model, GridFunction::constant(g, 0.0));
    return rep;
}

ConditionReport check_scramble(const LinearizedCoefficients& c) {
    if (c.alpha != 1.0) throw WrongRegime("check_scramble requires alpha = 1");
    const Grid& g = c.grid();
    const double gamma0 = c.gamma_star[0];   // gamma(0, P*)
    const double gammaQ0 = c.gammaQ_star[0]; // gamma_Q(0, P*)
    std::vector<double> bu(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) bu[i] = c.beta_star[i] * c.u_star[i];
    // int beta~_P(r, P*) u*(r) dr with beta~(s,P) = gamma(0,P) beta(s,P)
    const double coupling =
        gammaQ0 * integrate(GridFunction(g, std::move(bu))) + gamma0 * integrate(c.betaQ_u);
    std::vector<double> slack(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) {
        const double btilde = gamma0 * c.beta_star[i];
        slack[i] = c.mu_star[i] - c.w[i] * c.sigma_star_l1 -
                   std::fabs(btilde + c.w[i] * coupling);
    }
    ConditionReport rep = from_slack(GridFunction(g, std::move(slack)), true);
    if (rep.holds) rep.aux["kappa_max"] = rep.margin;
    return rep;
}

bool consistency_alarm(const LinearizedCoefficients& c) {
    if (!(c.b > 0.0)) return false;
    for (int i = 0; i <= c.grid().n(); ++i)
        if (c.betaQ_eq[i] < 0.0) return false;
    return check_dissipativity(c).holds;
}

}  // namespace hierstab
