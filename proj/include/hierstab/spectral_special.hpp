#pragma once

#include <map>
#include <optional>
#include <string>

#include "hierstab/linearization.hpp"

namespace hierstab {

enum class Verdict { Stable, Unstable, Inconclusive };

struct StabilityVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::string criterion;                  // which result produced the verdict
    std::map<std::string, double> evidence; // key numbers (dominant root, margins, ...)
};

const char* to_string(Verdict v);

/// Pi(lambda, s) = (gamma*(0)/gamma*(s)) exp(-int_0^s (lambda + mu*)/gamma*).
/// Defined only in the sigma* == 0 regime. Pi(0, .) equals survival pi(., Q*).
GridFunction capital_pi(const LinearizedCoefficients& c, double lambda);
double capital_pi(const LinearizedCoefficients& c, double lambda, double s);

/// Explicit characteristic function; eigenvalues are the solutions of K(lambda) = 1.
double K(const LinearizedCoefficients& c, double lambda);

/// Closed-form derivative of K; monotonicity certificate under positivity.
double K_prime(const LinearizedCoefficients& c, double lambda);

/// Largest real lambda in [lo, hi] with K(lambda) = 1 (sign-change scan plus
/// bisection to 1e-10); nullopt if K - 1 never changes sign on the window.
std::optional<double> dominant_root(const LinearizedCoefficients& c, double lo, double hi);

/// Default search window for dominant_root.
std::pair<double, double> default_root_window(const LinearizedCoefficients& c);

/// Fertility-monotonicity classification. The dominant root over the default
/// window is attached as evidence but never decides the verdict.
StabilityVerdict classify_special(const LinearizedCoefficients& c);

}  // namespace hierstab
