#pragma once

#include "hierstab/equilibrium.hpp"
#include "hierstab/model.hpp"

namespace hierstab {

/// Frozen coefficients of the perturbation system about an equilibrium.
struct LinearizedCoefficients {
    double alpha;
    double b;                     // birth level of the underlying equilibrium
    GridFunction u_star;
    GridFunction Q_star;
    GridFunction gamma_star;      // gamma(s, Q*(s)), positive
    GridFunction mu_star;         // mu(s, Q*(s))
    GridFunction rho_star;        // transport reaction coefficient
    GridFunction sigma_star;      // nonlocal coupling coefficient
    GridFunction e_star;          // exponential weight from the positivity argument
    GridFunction Gamma;           // int_0^s 1/gamma*
    GridFunction beta_star;       // beta(s, Q*(s))
    GridFunction betaQ_eq;        // beta_Q(s, Q*(s))
    GridFunction betaQ_u;         // beta_Q(s, Q*(s)) * u*(s)
    GridFunction gammaQ_star;     // gamma_Q(s, Q*(s))
    GridFunction w;               // weight at the nodes
    GridFunction w_prime;         // symbolic dw/ds at the nodes
    double sigma_star_l1;         // L1 norm of sigma*

    const Grid& grid() const { return u_star.grid(); }
    bool sigma_vanishes(double tol = 1e-12) const { return sigma_star.max_abs() <= tol; }
};

struct LinearizeOptions {
    // Literal reading of the e* display (w evaluated at the outer variable
    // instead of the integration variable); kept for comparison runs.
    bool estar_w_of_s = false;
};

LinearizedCoefficients linearize(const ModelSpec& model, const Equilibrium& eq,
                                 const LinearizeOptions& opts = {});

/// The boundary functional: Lambda(v) = int beta* v + int betaQ_u * E(v),
/// E(v)(s) = alpha int_0^s w v + int_s^m w v.
double apply_Lambda(const LinearizedCoefficients& c, const GridFunction& v);

}  // namespace hierstab
