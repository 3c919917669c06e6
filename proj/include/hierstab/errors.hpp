#pragma once

#include <stdexcept>
#include <string>

namespace hierstab {

// Invalid model ingredients (gamma <= 0, negative rates, bad grids, ...).
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver ran out of its iteration budget.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double at) : std::runtime_error(what), value(at) {}
    double value;  // the parameter (e.g. birth level b) at which convergence failed
};

// An operation was called outside the regime it is defined for
// (e.g. the explicit characteristic function with sigma* != 0).
class WrongRegime : public std::runtime_error {
public:
    explicit WrongRegime(const std::string& what) : std::runtime_error(what) {}
};

// The time integrator produced non-finite values.
class BlowUp : public std::runtime_error {
public:
    BlowUp(const std::string& what, double time) : std::runtime_error(what), t(time) {}
    double t;
};

}  // namespace hierstab
