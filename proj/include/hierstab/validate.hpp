#pragma once

#include <optional>
#include <vector>

#include "hierstab/conditions.hpp"
#include "hierstab/simulator.hpp"
#include "hierstab/spectral_general.hpp"
#include "hierstab/spectral_special.hpp"

namespace hierstab {

struct ValidateOptions {
    double b_lo = 0.0, b_hi = 10.0;
    std::optional<double> force_b;       // skip the R(Q*)=1 root and use this birth level
    ComplexRect rect{-3.0, 1.0, -10.0, 10.0};
    double sim_T = 20.0;                 // 0 disables the simulation route
    double sim_eps = 0.0;                // 0 means 1e-4 * ||u*||_1
    double sign_tol = 0.05;              // growth rates within +-tol count as zero
};

struct RouteResult {
    std::string name;
    std::optional<double> growth_rate;   // predicted linear growth rate, if the route yields one
    std::optional<bool> stable;          // hard verdict, if the route yields one
    std::string detail;
};

struct ValidationResult {
    Equilibrium equilibrium;
    std::vector<RouteResult> routes;
    bool alarm = false;                  // impossible equilibrium/dissipativity combination
    bool agree = true;                   // route growth-rate signs consistent
};

/// Run every applicable stability route on each equilibrium and compare the
/// signs of the predicted growth rates.
std::vector<ValidationResult> validate_model(const ModelSpec& model, const ValidateOptions& opts);

}  // namespace hierstab
