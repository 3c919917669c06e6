#pragma once

#include <complex>
#include <vector>

#include "hierstab/linearization.hpp"

namespace hierstab {

using Complex = std::complex<double>;

struct ComplexRect {
    double re_lo, re_hi, im_lo, im_hi;
    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
    bool contains(Complex z) const {
        return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
    }
};

/// Fundamental pair of the transformed second-order eigenvalue ODE with
/// initial data (1,0) and (0,1), sampled at the integration nodes.
struct FundamentalPair {
    int steps;
    std::vector<Complex> V1, V1p, V2, V2p;
};

struct EigenRoot {
    Complex lambda;
    double residual;  // |D(lambda)|
};

struct SpectrumReport {
    std::vector<EigenRoot> roots;
    double spectral_bound_estimate;  // max Re over roots, -inf if none
    ComplexRect search_region;
    bool complete = true;            // false when max_roots was exhausted
    int determinant_evaluations = 0;
    int newton_iterations = 0;
};

/// Integrate the transformed ODE by the classical 4th-order one-step method.
/// steps = 0 picks the coefficient grid resolution. Requires alpha < 1.
FundamentalPair fundamental_solutions(const LinearizedCoefficients& c, Complex lambda,
                                      int steps = 0);

/// Characteristic determinant D = H1 J2 - H2 J1 of the boundary conditions
/// applied to the fundamental pair. Zeros are the eigenvalues. Requires alpha < 1.
Complex char_determinant(const LinearizedCoefficients& c, Complex lambda, int steps = 0);

/// Scramble-competition determinant (alpha = 1): the interaction value is a
/// scalar and the eigenfunction solves a first-order problem with that scalar
/// as parameter; the 2x2 compatibility determinant is returned.
Complex char_determinant_alpha1(const LinearizedCoefficients& c, Complex lambda, int steps = 0);

/// D for the applicable regime (dispatches on alpha).
Complex determinant(const LinearizedCoefficients& c, Complex lambda, int steps = 0);

/// Winding number of D along the rectangle boundary; equals the number of
/// zeros inside counted with multiplicity. Throws std::runtime_error if D
/// nearly vanishes on the boundary (perturb the rectangle).
int count_roots(const LinearizedCoefficients& c, const ComplexRect& rect);

/// Subdivision + Newton polish. Roots are sorted by real part, then imaginary.
SpectrumReport find_roots(const LinearizedCoefficients& c, const ComplexRect& rect,
                          int max_roots = 32);

/// Real zeros of the determinant on [lo, hi] (sign-change scan + bisection).
std::vector<double> real_determinant_zeros(const LinearizedCoefficients& c, double lo, double hi,
                                           int scan = 256);

}  // namespace hierstab
