#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hierstab/equilibrium.hpp"
#include "hierstab/model.hpp"

namespace hierstab {

struct SimState {
    double t = 0.0;
    GridFunction u;
    GridFunction Q;      // environment of u, refreshed after every step
    double dt_last = 0.0;
};

SimState make_state(const ModelSpec& model, const GridFunction& u0);

/// One conservative upwind step (rightward transport, gamma > 0) with explicit
/// decay and the nonlocal inflow boundary taken from the beginning-of-step
/// density. dt defaults to cfl * h / max gamma. The OpenMP kernels and the
/// serial reference path produce bit-identical states.
SimState step(const ModelSpec& model, const SimState& state,
              std::optional<double> dt = std::nullopt, bool parallel = true);

SimState step_serial(const ModelSpec& model, const SimState& state,
                     std::optional<double> dt = std::nullopt);

/// Renewal inflow int_0^m beta(s, Q(s,t)) u(s,t) ds.
double boundary_inflow(const ModelSpec& model, const SimState& state);

double cfl_dt(const ModelSpec& model, const SimState& state);

struct RateSample {
    double t;
    double norm;  // L1 distance between the perturbed and reference trajectories
};

struct RateMeasurement {
    double rate;                     // least-squares slope of log norm
    double fit_t_lo, fit_t_hi;       // window actually used for the fit
    std::vector<RateSample> samples;
};

/// Empirical perturbation growth rate: the perturbed and unperturbed
/// trajectories are advanced in lockstep (shared dt) and the slope of
/// log ||difference||_1 is fitted over the second half of the usable record
/// (samples below 1e-12 are excluded).
RateMeasurement measure_rate(const ModelSpec& model, const Equilibrium& eq,
                             const GridFunction& v0, double eps, double T);

/// Long-format trajectory CSV: header "t,s,u".
void write_trajectory_csv(const std::string& path, const ModelSpec& model,
                          const GridFunction& u0, double T, int snapshots);

/// Rate-study CSV: header "t,norm_L1_diff".
void write_rate_csv(const std::string& path, const RateMeasurement& m);

}  // namespace hierstab
