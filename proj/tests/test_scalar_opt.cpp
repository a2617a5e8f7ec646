#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "freshcon/scalar_opt.hpp"

using freshcon::opt::maximize_concave;
using freshcon::opt::maximize_concave_golden;

TEST_SUITE_BEGIN("scalar_opt");

TEST_CASE("quadratic maxima land on the vertex") {
    auto value = [](double x) { return -(x - 3.0) * (x - 3.0); };
    auto deriv = [](double x) { return -2.0 * (x - 3.0); };

    CHECK(maximize_concave(value, deriv, 0.0, 10.0).x == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(maximize_concave_golden(value, 0.0, 10.0).x == doctest::Approx(3.0).epsilon(1e-7));

    SUBCASE("boundary maxima") {
        CHECK(maximize_concave(value, deriv, 4.0, 10.0).x == 4.0);
        CHECK(maximize_concave(value, deriv, -5.0, 2.0).x == 2.0);
    }
    SUBCASE("empty interval rejected") {
        CHECK_THROWS_AS(maximize_concave(value, deriv, 5.0, 4.0), std::domain_error);
    }
}

TEST_CASE("flat objectives resolve by the preference flag") {
    auto value = [](double) { return 1.0; };
    auto deriv = [](double) { return 0.0; };
    CHECK(maximize_concave(value, deriv, 2.0, 9.0, 1e-9, 200, true).x == 2.0);
    CHECK(maximize_concave(value, deriv, 2.0, 9.0, 1e-9, 200, false).x == 9.0);
    CHECK(maximize_concave_golden(value, 2.0, 9.0, 1e-9, 200, true).x == 2.0);
    CHECK(maximize_concave_golden(value, 2.0, 9.0, 1e-9, 200, false).x == 9.0);
}

TEST_CASE("derivative and golden section agree on a smooth objective") {
    auto value = [](double x) { return std::log(x) - 0.25 * x; };
    auto deriv = [](double x) { return 1.0 / x - 0.25; };
    const double with_deriv = maximize_concave(value, deriv, 0.5, 20.0).x;
    const double golden = maximize_concave_golden(value, 0.5, 20.0, 1e-10, 400).x;
    CHECK(with_deriv == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(golden == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_SUITE_END();
