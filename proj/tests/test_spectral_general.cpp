#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hierstab/spectral_general.hpp"
#include "hierstab/spectral_special.hpp"
#include "test_models.hpp"

using namespace hierstab;

namespace {

LinearizedCoefficients at_positive_equilibrium(const ModelSpec& model) {
    auto eqs = solve_equilibrium(model, 0.0, 10.0);
    REQUIRE(eqs.size() >= 2);
    REQUIRE(eqs.back().positive());
    return linearize(model, eqs.back());
}

}  // namespace

TEST_CASE("fundamental pair against the closed form") {
    // With sigma* = 0 the second-order problem degenerates: V1 stays constant
    // and V2' equals the survival kernel Pi(lambda, .).
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(1024));
    const Complex lambda(0.3, 0.0);
    FundamentalPair fp = fundamental_solutions(c, lambda);
    for (int k = 0; k <= fp.steps; k += 64) {
        const double s = c.grid().m() * k / fp.steps;
        CHECK(std::abs(fp.V1[k] - 1.0) < 1e-12);
        CHECK(std::abs(fp.V1p[k]) < 1e-12);
        CHECK(std::abs(fp.V2p[k] - capital_pi(c, 0.3, s)) < 1e-6);
    }
}

TEST_CASE("shooting integration is fourth-order accurate") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(1024));
    const Complex lambda(0.3, 0.0);
    const double exact = std::pow(0.5, 2.0 * 0.3 + 1.0);  // Pi(0.3, m)
    auto err = [&](int steps) {
        FundamentalPair fp = fundamental_solutions(c, lambda, steps);
        return std::abs(fp.V2p.back() - exact);
    };
    const double order = std::log2(err(16) / err(32));
    CHECK(order > 3.5);
    CHECK(order < 4.5);
}

TEST_CASE("determinant is conjugate-symmetric") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::steep_fertility(512));
    for (Complex z : {Complex(-1.0, 2.0), Complex(0.5, -4.0), Complex(-3.0, 7.5)})
        CHECK(std::abs(determinant(c, std::conj(z)) - std::conj(determinant(c, z))) < 1e-12);
}

TEST_CASE("real determinant zeros coincide with the explicit eigenvalues") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(1024));
    std::vector<double> dz = real_determinant_zeros(c, -5.0, 5.0);
    REQUIRE(!dz.empty());
    for (double z : dz) CHECK(K(c, z) == doctest::Approx(1.0).epsilon(1e-6));
    auto kroot = dominant_root(c, -5.0, 5.0);
    REQUIRE(kroot.has_value());
    CHECK(std::fabs(dz.back() - *kroot) < 1e-6);
}

TEST_CASE("root counting by winding number") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(1024));
    // one real root near -1.06 plus a conjugate pair near -2.18 +- 5.43i
    CHECK(count_roots(c, ComplexRect{-3.0, 1.0, -10.0, 10.0}) == 3);
    CHECK(count_roots(c, ComplexRect{-1.5, 0.0, -1.0, 1.0}) == 1);
    CHECK(count_roots(c, ComplexRect{5.0, 10.0, -5.0, 5.0}) == 0);
}

TEST_CASE("root count is additive under subdivision") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::steep_fertility(512));
    const ComplexRect whole{-4.0, 1.0, -10.0, 10.0};
    const int n_whole = count_roots(c, whole);
    CHECK(n_whole == 5);
    const int n_lower = count_roots(c, ComplexRect{-4.0, 1.0, -10.0, -0.5});
    const int n_upper = count_roots(c, ComplexRect{-4.0, 1.0, -0.5, 10.0});
    CHECK(n_lower + n_upper == n_whole);
}

TEST_CASE("polished eigenvalues of the steep-fertility model") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::steep_fertility(1024));
    SpectrumReport rep = find_roots(c, ComplexRect{-4.0, 1.0, -10.0, 10.0});
    REQUIRE(rep.roots.size() == 5);
    CHECK(rep.complete);
    // sorted by real part: a conjugate pair near -3.48 +- 9.93i, a real root,
    // then the dominant pair near -3.05 +- 5.23i
    CHECK(rep.roots[0].lambda.real() == doctest::Approx(-3.4763336).epsilon(1e-3));
    CHECK(std::fabs(rep.roots[0].lambda.imag()) == doctest::Approx(9.9300800).epsilon(1e-3));
    CHECK(rep.roots[2].lambda.real() == doctest::Approx(-3.3917389).epsilon(1e-3));
    CHECK(std::fabs(rep.roots[2].lambda.imag()) < 1e-8);
    CHECK(rep.roots[3].lambda.real() == doctest::Approx(-3.0548027).epsilon(1e-3));
    CHECK(std::fabs(rep.roots[3].lambda.imag()) == doctest::Approx(5.2257251).epsilon(1e-3));
    CHECK(rep.roots[3].lambda.imag() == doctest::Approx(-rep.roots[4].lambda.imag()).epsilon(1e-9));
    CHECK(rep.spectral_bound_estimate == doctest::Approx(-3.0548027).epsilon(1e-3));
    for (const auto& r : rep.roots) CHECK(r.residual < 1e-6);
}

TEST_CASE("scalar-interaction determinant matches the explicit function") {
    // alpha = 1 with constant gamma: the 2x2 compatibility determinant reduces
    // to K(lambda) - 1.
    ModelSpec model = testmodels::from_json(R"js({
        "m": 1.0, "alpha": 1.0,
        "w": "1", "gamma": "1", "mu": "1",
        "beta": "0.9*(2-Q)", "q_validation_max": 2.0})js", 1024);
    auto eqs = solve_equilibrium(model, 0.0, 10.0);
    REQUIRE(eqs.size() == 2);
    LinearizedCoefficients c = linearize(model, eqs[1]);
    REQUIRE(c.sigma_vanishes());
    for (double lambda : {-1.5, -0.5, 0.0, 1.0}) {
        const Complex d = determinant(c, Complex(lambda, 0.0));
        CHECK(d.real() == doctest::Approx(K(c, lambda) - 1.0).epsilon(1e-8));
        CHECK(std::fabs(d.imag()) < 1e-12);
    }
    CHECK_THROWS_AS(char_determinant(c, Complex(0.0, 0.0)), WrongRegime);
}

TEST_CASE("determinant route agrees across grid resolutions") {
    auto bound_at = [](int n) {
        LinearizedCoefficients c = at_positive_equilibrium(testmodels::steep_fertility(n));
        SpectrumReport rep = find_roots(c, ComplexRect{-4.0, 1.0, -10.0, 10.0});
        REQUIRE(!rep.roots.empty());
        return rep.spectral_bound_estimate;
    };
    CHECK(std::fabs(bound_at(512) - bound_at(1024)) < 1e-3);
}
