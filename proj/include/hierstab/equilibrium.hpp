#pragma once

#include <vector>

#include "hierstab/grid.hpp"
#include "hierstab/model.hpp"

namespace hierstab {

/// A stationary solution: u*(s) = b * pi(s, Q*) with Q* = environment(u*).
/// b = 0 encodes the trivial equilibrium.
struct Equilibrium {
    double b = 0.0;                        // birth level u*(0)
    GridFunction u_star;
    GridFunction Q_star;
    double net_reproduction_residual = 0.0;  // |R(Q*) - 1| at the solution (0 for trivial)
    int fixed_point_iterations = 0;

    bool positive() const { return b > 0.0; }
};

/// pi(s, Q) = (gamma(0,Q(0)) / gamma(s,Q(s))) * exp(-int_0^s mu/gamma).
GridFunction survival(const ModelSpec& model, const GridFunction& Q);

/// Inherent net reproduction rate R(Q) = int_0^m beta(s,Q(s)) pi(s,Q) ds.
double net_reproduction(const ModelSpec& model, const GridFunction& Q);

/// Damped fixed point on Q at fixed birth level b:
/// Q_{k+1} = (1-theta) Q_k + theta * environment(b * survival(Q_k)).
/// Returns the converged Q and the iteration count. Throws NonConvergence.
std::pair<GridFunction, int> equilibrium_environment(const ModelSpec& model, double b);

/// All equilibria with b in [b_lo, b_hi]: sign changes of F(b) = R(Q(b)) - 1
/// are scanned and bisected to |F| <= bisect_tol. The trivial equilibrium is
/// always first in the returned list.
std::vector<Equilibrium> solve_equilibrium(const ModelSpec& model, double b_lo, double b_hi);

/// Pseudo-equilibrium at a prescribed birth level: the inner fixed point is run
/// but R(Q*) = 1 is not enforced. Used for consistency diagnostics.
Equilibrium equilibrium_at(const ModelSpec& model, double b);

}  // namespace hierstab
