#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
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

TEST_CASE("survival kernel has a closed form for the shrinking growth rate") {
    // Pi(lambda, s) = (1 - s/2)^(2 lambda + 1)
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(1024));
    for (double lambda : {-0.5, 0.0, 0.7}) {
        GridFunction pi = capital_pi(c, lambda);
        for (int i = 0; i <= c.grid().n(); i += 128) {
            const double s = c.grid().node(i);
            CHECK(pi[i] ==
                  doctest::Approx(std::pow(1.0 - s / 2.0, 2.0 * lambda + 1.0)).epsilon(1e-6));
        }
        CHECK(capital_pi(c, lambda, 0.5) == doctest::Approx(pi(0.5)).epsilon(1e-12));
    }
}

TEST_CASE("characteristic function value at zero") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(2048));
    CHECK(K(c, 0.0) == doctest::Approx(434.0 / 997.0).epsilon(1e-6));
}

TEST_CASE("derivative of the characteristic function") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(1024));
    const double h = 1e-6;
    for (double lambda : {-1.0, 0.0, 0.5}) {
        const double fd = (K(c, lambda + h) - K(c, lambda - h)) / (2.0 * h);
        CHECK(K_prime(c, lambda) == doctest::Approx(fd).epsilon(1e-5));
        CHECK(K_prime(c, lambda) < 0.0);  // strictly decreasing under positivity
    }
}

TEST_CASE("dominant eigenvalue of the decreasing-fertility model") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(2048));
    auto [lo, hi] = default_root_window(c);
    auto root = dominant_root(c, lo, hi);
    REQUIRE(root.has_value());
    CHECK(*root == doctest::Approx(-1.0597232203).epsilon(5e-5));
    CHECK(K(c, *root) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("tripled fertility pushes the dominant eigenvalue positive") {
    ModelSpec model = testmodels::decreasing_fertility(2048);
    model.beta = Expr::parse("3*(480/997)*(1+s)*(3-2*Q)");
    model.validate();
    // same density profile, now out of balance: R = 3 at the old equilibrium
    Equilibrium eq = equilibrium_at(model, 1.0);
    LinearizedCoefficients c = linearize(model, eq);
    CHECK(K(c, 0.0) == doctest::Approx(3.0 * 434.0 / 997.0).epsilon(1e-6));
    auto root = dominant_root(c, -2.0, 2.0);
    REQUIRE(root.has_value());
    CHECK(*root == doctest::Approx(0.3920810564).epsilon(5e-5));
}

TEST_CASE("characteristic function decays to the right") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(512));
    CHECK(K(c, 10.0) < K(c, 1.0));
    CHECK(K(c, 1.0) < K(c, 0.0));
    // one term of K decays only like 1/lambda, so the tail is slow but small
    CHECK(K(c, 30.0) < 0.05);
    CHECK(K(c, 30.0) < K(c, 10.0));
}

TEST_CASE("monotone-fertility classification") {
    SUBCASE("decreasing fertility is stable") {
        LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(1024));
        StabilityVerdict v = classify_special(c);
        CHECK(v.verdict == Verdict::Stable);
        CHECK(v.evidence.count("dominant_root") == 1);
        CHECK(v.evidence.at("dominant_root") < 0.0);
    }
    SUBCASE("increasing fertility is unstable") {
        LinearizedCoefficients c = at_positive_equilibrium(testmodels::increasing_fertility(1024));
        CHECK(c.b == doctest::Approx(0.4973).epsilon(1e-3));
        StabilityVerdict v = classify_special(c);
        CHECK(v.verdict == Verdict::Unstable);
        CHECK(v.evidence.at("dominant_root") > 0.0);
    }
    SUBCASE("sign-changing fertility slope is inconclusive") {
        ModelSpec model = testmodels::from_json(R"js({
            "m": 1.0, "alpha": 0.5,
            "w": "1", "gamma": "1", "mu": "1",
            "beta": "(1+s)*(1+(s-0.5)*Q)", "q_validation_max": 0.5})js", 512);
        Equilibrium eq = equilibrium_at(model, 1.0);
        StabilityVerdict v = classify_special(linearize(model, eq));
        CHECK(v.verdict == Verdict::Inconclusive);
    }
}

TEST_CASE("explicit route rejects models with nonlocal coupling") {
    ModelSpec model = testmodels::from_json(R"js({
        "m": 1.0, "alpha": 0.5,
        "w": "1", "gamma": "1", "mu": "1 + Q/10",
        "beta": "1/2", "q_validation_max": 2.0})js", 256);
    Equilibrium eq = equilibrium_at(model, 1.0);
    LinearizedCoefficients c = linearize(model, eq);
    CHECK_THROWS_AS(K(c, 0.0), WrongRegime);
    CHECK_THROWS_AS(dominant_root(c, -1.0, 1.0), WrongRegime);
}
