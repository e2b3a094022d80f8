#include "finfo/errors.hpp"
#include "finfo/potentials.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <variant>

using namespace finfo;

TEST_CASE("polynomial potential evaluation and confinement") {
    auto p = potential_from_multipliers({0.0, -8.0});
    CHECK(p.evaluate(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.evaluate(0.0) == 0.0);

    auto h = potential_from_multipliers({0.0, -16.0});
    CHECK(omega_from_lambda2(h.lambdas[1]) == doctest::Approx(2.0).epsilon(1e-15));

    CHECK_THROWS_AS(potential_from_multipliers({0.0, 1.0}), NotConfiningError);
    CHECK_THROWS_AS(potential_from_multipliers({1.0}), NotConfiningError);
    CHECK_THROWS_AS(potential_from_multipliers({0.0, 0.0}), NotConfiningError);
    CHECK_THROWS_AS(potential_from_multipliers({0.0, -4.0, 0.5}), NotConfiningError);
}

TEST_CASE("omega and lambda2 round trips") {
    CHECK(omega_from_lambda2(-4.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lambda2_from_omega(1.0) == doctest::Approx(-4.0).epsilon(1e-15));
    CHECK(omega_from_lambda2(-16.0) == doctest::Approx(2.0).epsilon(1e-15));
    for (double w : {0.25, 1.0, 3.5}) {
        CHECK(omega_from_lambda2(lambda2_from_omega(w)) == doctest::Approx(w).epsilon(1e-15));
    }
    CHECK_THROWS_AS(omega_from_lambda2(1.0), SignError);
    CHECK_THROWS_AS(lambda2_from_omega(-1.0), SignError);
}

TEST_CASE("multiplier re-designations for the oscillator") {
    auto harm = multipliers_from_oscillator({1.0, 0.0, 0.0});
    REQUIRE(harm.lambdas.size() == 2);
    CHECK(harm.lambdas[1] == doctest::Approx(-4.0).epsilon(1e-15));

    auto an = multipliers_from_oscillator({1.0, 0.05, 0.05});
    REQUIRE(an.lambdas.size() == 4);
    CHECK(an.lambdas[2] == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(an.lambdas[3] == doctest::Approx(-0.4).epsilon(1e-12));

    auto an2 = multipliers_from_oscillator({4.0, 0.0, 0.1});
    CHECK(an2.lambdas[3] == doctest::Approx(-12.8).epsilon(1e-12));

    CHECK_THROWS_AS(multipliers_from_oscillator({1.0, 0.05, 0.0}), SignError);
    CHECK_THROWS_AS(multipliers_from_oscillator({1.0, 0.0, -0.1}), SignError);
    CHECK_THROWS_AS(multipliers_from_oscillator({-1.0, 0.0, 0.0}), SignError);
}

TEST_CASE("multiplier form reproduces the direct oscillator potential") {
    OscillatorParams p{1.3, 0.04, 0.06};
    auto poly = multipliers_from_oscillator(p);
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        double x = uni(rng);
        CHECK(poly.evaluate(x) ==
              doctest::Approx(oscillator_potential(p, x)).epsilon(1e-12));
    }
}

TEST_CASE("even potentials are even") {
    auto harm = multipliers_from_oscillator({1.0, 0.0, 0.0});
    CHECK(harm.even());
    for (double x : {0.3, 1.7, 4.4}) CHECK(harm.evaluate(x) == harm.evaluate(-x));
    SquareWellPotential w{1.0, 2.0};
    for (double x : {0.3, 0.9999, 1.0001, 3.0}) CHECK(w.evaluate(x) == w.evaluate(-x));
    auto skewed = multipliers_from_oscillator({1.0, 0.1, 0.1});
    CHECK(!skewed.even());
}

TEST_CASE("energy from the normalization multiplier") {
    CHECK(energy_from_epsilon(8.0) == 1.0);
    CHECK(energy_from_epsilon(4.0) == 0.5);
    CHECK(energy_from_epsilon(-4.0) == -0.5);
}

TEST_CASE("potential spec JSON") {
    auto p = parse_potential_json(R"({"type":"oscillator","omega":1.0,"eps1":0.0,"eps2":0.0})");
    auto* poly = std::get_if<PolynomialPotential>(&p);
    REQUIRE(poly != nullptr);
    CHECK(poly->lambdas[1] == doctest::Approx(-4.0));

    auto w = parse_potential_json(R"({"type":"square_well","half_width":1.0,"depth":2.0})");
    CHECK(std::get<SquareWellPotential>(w).depth == 2.0);

    auto d = parse_potential_json(R"({"type":"delta","strength":1.5})");
    CHECK(std::get<DeltaPotential>(d).strength == 1.5);

    // Round trip through the serialized form.
    auto again = parse_potential_json(potential_to_json(w));
    CHECK(std::get<SquareWellPotential>(again).half_width == 1.0);

    CHECK_THROWS_AS(parse_potential_json("{"), IoError);
    CHECK_THROWS_AS(parse_potential_json(R"({"type":"banana"})"), IoError);
    CHECK_THROWS_AS(parse_potential_json(R"({"type":"polynomial","lambdas":[0,4]})"),
                    NotConfiningError);
    CHECK_THROWS_AS(parse_potential_json(R"({"type":"delta","strength":-1})"), SignError);
}
