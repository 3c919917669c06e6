#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hierstab/conditions.hpp"
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

TEST_CASE("positivity holds for the decreasing-fertility model") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(2048));
    auto [sigma_rep, fert_rep] = check_positivity(c);
    CHECK(sigma_rep.holds);               // sigma* == 0: the tie counts as holding
    CHECK(std::fabs(sigma_rep.margin) < 1e-12);
    CHECK(fert_rep.holds);
    // the fertility bracket reduces to (960/997)(-s^3/24 + s^2/4 + 3s/4 + 5/24)
    const Grid& g = c.grid();
    for (int i = 0; i <= g.n(); i += 128) {
        const double s = g.node(i);
        const double poly = -s * s * s / 24.0 + s * s / 4.0 + 3.0 * s / 4.0 + 5.0 / 24.0;
        CHECK(fert_rep.per_node_slack[i] ==
              doctest::Approx(960.0 / 997.0 * poly).epsilon(1e-5));
    }
    CHECK(fert_rep.margin > 0.0);
    CHECK(fert_rep.worst_node == doctest::Approx(0.0));  // minimum sits at s = 0
}

TEST_CASE("steep fertility decline violates the fertility positivity condition") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::steep_fertility(2048));
    auto [sigma_rep, fert_rep] = check_positivity(c);
    CHECK(sigma_rep.holds);
    CHECK_FALSE(fert_rep.holds);
    // bracket at s = 0: -(160/159)(7/12)
    CHECK(fert_rep.margin == doctest::Approx(-1120.0 / 1908.0).epsilon(1e-3));
    CHECK(fert_rep.worst_node == doctest::Approx(0.0));
}

TEST_CASE("dissipativity of the steep-fertility model") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::steep_fertility(2048));
    ConditionReport rep = check_dissipativity(c);
    CHECK(rep.holds);
    CHECK(rep.aux.at("kappa_max") == doctest::Approx(197.0 / 477.0).epsilon(0.002 / 0.413));
    CHECK(rep.margin == rep.aux.at("kappa_max"));
    CHECK(rep.worst_node == doctest::Approx(0.0));
}

TEST_CASE("dissipativity fails for the shallow fertility decline") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(2048));
    ConditionReport rep = check_dissipativity(c);
    CHECK_FALSE(rep.holds);
    // bracket at s = 1 evaluates to 1120/997, overshooting mu* = 1
    CHECK(rep.margin == doctest::Approx(1.0 - 1120.0 / 997.0).epsilon(1e-3));
    CHECK(rep.worst_node == doctest::Approx(1.0));
}

TEST_CASE("trivial-equilibrium criterion") {
    SUBCASE("subcritical constant rates") {
        ModelSpec model = testmodels::constant_rates(256);
        ConditionReport rep = check_trivial(model);
        CHECK(rep.holds);
        CHECK(rep.margin == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rep.aux.at("R0") == doctest::Approx((1.0 - std::exp(-1.0)) / 2.0).epsilon(1e-6));
    }
    SUBCASE("fails when empty-environment fertility is strong") {
        ModelSpec model = testmodels::decreasing_fertility(256);
        ConditionReport rep = check_trivial(model);
        CHECK_FALSE(rep.holds);
        CHECK(rep.aux.at("R0") > 1.0);
    }
}

TEST_CASE("scramble form coincides with dissipativity when growth ignores the environment") {
    ModelSpec model = testmodels::from_json(R"js({
        "m": 1.0, "alpha": 1.0,
        "w": "1", "gamma": "1", "mu": "1",
        "beta": "0.9*(2-Q)", "q_validation_max": 2.0})js", 512);
    auto eqs = solve_equilibrium(model, 0.0, 10.0);
    REQUIRE(eqs.size() == 2);
    LinearizedCoefficients c = linearize(model, eqs[1]);
    ConditionReport scr = check_scramble(c);
    ConditionReport dis = check_dissipativity(c);
    CHECK(scr.holds == dis.holds);
    for (int i = 0; i <= c.grid().n(); i += 32)
        CHECK(scr.per_node_slack[i] == doctest::Approx(dis.per_node_slack[i]).epsilon(1e-9));
}

TEST_CASE("scramble check requires scramble competition") {
    LinearizedCoefficients c = at_positive_equilibrium(testmodels::decreasing_fertility(256));
    CHECK_THROWS_AS(check_scramble(c), WrongRegime);
}

TEST_CASE("consistency alarm") {
    SUBCASE("quiet on the worked examples") {
        CHECK_FALSE(consistency_alarm(at_positive_equilibrium(testmodels::decreasing_fertility(512))));
        CHECK_FALSE(consistency_alarm(at_positive_equilibrium(testmodels::steep_fertility(512))));
    }
    SUBCASE("raised for an impossible equilibrium") {
        // increasing fertility with dominant mortality: dissipativity holds, so a
        // positive equilibrium cannot exist -- feed a fabricated one anyway
        ModelSpec model = testmodels::from_json(R"js({
            "m": 1.0, "alpha": 0.5,
            "w": "1", "gamma": "1", "mu": "2",
            "beta": "0.1*(1+Q)", "q_validation_max": 3.0})js", 512);
        Equilibrium fake = equilibrium_at(model, 1.0);
        LinearizedCoefficients c = linearize(model, fake);
        CHECK(check_dissipativity(c).holds);
        CHECK(consistency_alarm(c));
    }
}
