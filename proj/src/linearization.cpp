#include "hierstab/linearization.hpp"

#include <cmath>

namespace hierstab {

LinearizedCoefficients linearize(const ModelSpec& model, const Equilibrium& eq,
                                 const LinearizeOptions& opts) {
    const Grid g = eq.u_star.grid();
    const double alpha = model.alpha;
    const Expr gamma_s = model.gamma.diff(Var::S);
    const Expr gamma_Q = model.gamma.diff(Var::Q);
    const Expr gamma_sQ = gamma_s.diff(Var::Q);
    const Expr gamma_QQ = gamma_Q.diff(Var::Q);
    const Expr mu_Q = model.mu.diff(Var::Q);
    const Expr beta_Q = model.beta.diff(Var::Q);
    const Expr w_s = model.w.diff(Var::S);

    const int nn = g.num_nodes();
    std::vector<double> gam(nn), mu(nn), rho(nn), sig(nn), bet(nn), betQ(nn), betQu(nn),
        gamQ(nn), wv(nn), wp(nn), inv_gam(nn), estar_integrand(nn);

    for (int i = 0; i < nn; ++i) {
        const double s = g.node(i);
        const double Q = eq.Q_star[i];
        const double u = eq.u_star[i];
        gam[i] = model.gamma.eval(s, Q);
        if (!(gam[i] > 0.0))
            throw ModelError("linearize: gamma* <= 0 at s=" + std::to_string(s));
        mu[i] = model.mu.eval(s, Q);
        wv[i] = model.w.eval(s, 0.0);
        wp[i] = w_s.eval(s, 0.0);
        const double gs = gamma_s.eval(s, Q);
        const double gQ = gamma_Q.eval(s, Q);
        const double gsQ = gamma_sQ.eval(s, Q);
        const double gQQ = gamma_QQ.eval(s, Q);
        const double mQ = mu_Q.eval(s, Q);
        gamQ[i] = gQ;
        rho[i] = mu[i] + gs + 2.0 * (alpha - 1.0) * wv[i] * gQ * u;
        // u*' from the stationary relation u* = b pi(s, Q*), differentiated
        // analytically with Q*' = (alpha - 1) w u*
        const double u_prime = -u * (mu[i] + gs + (alpha - 1.0) * wv[i] * gQ * u) / gam[i];
        sig[i] = mQ * u + gsQ * u + gQ * u_prime + (alpha - 1.0) * wv[i] * gQQ * u * u;
        bet[i] = model.beta.eval(s, Q);
        betQ[i] = beta_Q.eval(s, Q);
        betQu[i] = betQ[i] * u;
        inv_gam[i] = 1.0 / gam[i];
        estar_integrand[i] = gQ * u / gam[i];
        if (!opts.estar_w_of_s) estar_integrand[i] *= wv[i];
    }

    GridFunction Gamma = cumulative_integral(GridFunction(g, inv_gam), true);
    GridFunction estar_cum = cumulative_integral(GridFunction(g, estar_integrand), true);
    std::vector<double> estar(nn);
    for (int i = 0; i < nn; ++i) {
        double arg = (1.0 - alpha) * estar_cum[i];
        if (opts.estar_w_of_s) arg *= wv[i];
        estar[i] = std::exp(arg);
    }

    std::vector<double> abs_sig(nn);
    for (int i = 0; i < nn; ++i) abs_sig[i] = std::fabs(sig[i]);
    const double sig_l1 = integrate(GridFunction(g, abs_sig));

    return LinearizedCoefficients{
        alpha,
        eq.b,
        eq.u_star,
        eq.Q_star,
        GridFunction(g, std::move(gam)),
        GridFunction(g, std::move(mu)),
        GridFunction(g, std::move(rho)),
        GridFunction(g, std::move(sig)),
        GridFunction(g, std::move(estar)),
        std::move(Gamma),
        GridFunction(g, std::move(bet)),
        GridFunction(g, std::move(betQ)),
        GridFunction(g, std::move(betQu)),
        GridFunction(g, std::move(gamQ)),
        GridFunction(g, std::move(wv)),
        GridFunction(g, std::move(wp)),
        sig_l1,
    };
}

double apply_Lambda(const LinearizedCoefficients& c, const GridFunction& v) {
    const Grid& g = c.grid();
    if (v.grid() != g) throw std::domain_error("apply_Lambda: grid mismatch");
    GridFunction E = environment(v, c.alpha, c.w);
    std::vector<double> f(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i) f[i] = c.beta_star[i] * v[i] + c.betaQ_u[i] * E[i];
    return integrate(GridFunction(g, std::move(f)));
}

}  // namespace hierstab
