#pragma once

#include <string>

#include "hierstab/expr.hpp"
#include "hierstab/grid.hpp"

namespace hierstab {

struct SolverSettings {
    double theta = 0.5;          // damping of the inner fixed point on Q
    double fp_tol = 1e-12;       // inner fixed-point tolerance (max norm)
    int fp_max_iter = 500;
    double bisect_tol = 1e-10;   // |R(Q(b)) - 1| target for the outer bisection
    int scan_points = 64;        // sign-change scan resolution over the b range
};

struct SimSettings {
    double cfl = 0.9;
};

/// The model ingredients m, alpha, w, beta, gamma, mu plus numerical settings.
struct ModelSpec {
    double m;
    double alpha;
    int grid_n = 2048;
    Expr w;      // weight, s only
    Expr beta;   // fertility beta(s, Q)
    Expr gamma;  // growth rate gamma(s, Q)
    Expr mu;     // mortality mu(s, Q)
    double q_validation_max = 1.0;
    SolverSettings solver;
    SimSettings simulation;

    Grid grid() const { return Grid(m, grid_n); }

    /// Sign checks at all grid nodes over Q in [0, q_validation_max]:
    /// w > 0, gamma > 0, mu >= 0, beta >= 0. Throws ModelError on violation.
    void validate() const;
};

/// Parse a JSON model file (keys m, alpha, grid_n, w, beta, gamma, mu,
/// q_validation_max and optional solver/simulation blocks) and validate it.
ModelSpec load_model(const std::string& path);
ModelSpec parse_model(const std::string& json_text);

}  // namespace hierstab
