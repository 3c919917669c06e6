#pragma once

#include <map>
#include <string>

#include "hierstab/linearization.hpp"

namespace hierstab {

/// Quadrature-level verification of a pointwise inequality: per-node slack,
/// its minimum, and where the minimum is attained.
struct ConditionReport {
    bool holds = false;
    double margin = 0.0;                  // min over nodes of the slack
    double worst_node = 0.0;              // s location of the minimum
    GridFunction per_node_slack;
    std::map<std::string, double> aux;    // extra figures (kappa_max, R0, ...)
};

/// Positivity of the linearized semigroup: sigma* <= 0 and the fertility
/// bracket beta* + w (int_0^s betaQ u* + alpha int_s^m betaQ u*) >= 0.
/// Both inequalities are non-strict; ties hold.
std::pair<ConditionReport, ConditionReport> check_positivity(const LinearizedCoefficients& c);

/// Dissipativity criterion (strict). When it holds, aux["kappa_max"] is the
/// minimum slack; any kappa in (0, kappa_max] certifies ||T(t)|| <= e^{-kappa t}.
ConditionReport check_dissipativity(const LinearizedCoefficients& c);

/// Stability of the trivial equilibrium: mu(s,0) > gamma(0,0) beta(s,0).
/// aux["R0"] reports the net reproduction rate in the empty environment.
ConditionReport check_trivial(const ModelSpec& model);

/// Scramble-competition (alpha = 1) form of the dissipativity criterion in
/// terms of the modified fertility beta~(s,P) = gamma(0,P) beta(s,P).
ConditionReport check_scramble(const LinearizedCoefficients& c);

/// The combination "positive equilibrium + dissipativity + beta_Q >= 0" is
/// impossible at a true equilibrium; true means inconsistent inputs.
bool consistency_alarm(const LinearizedCoefficients& c);

}  // namespace hierstab
