#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "caskit/quadrature.hpp"

using namespace caskit;

TEST_CASE("finite interval: polynomial exact, sin over period") {
    quad::QuadratureSpec spec;
    auto poly = [](double x) { return 3.0 * x * x; };
    CHECK(quad::integrate(poly, 0.0, 2.0, spec).value == doctest::Approx(8.0).epsilon(1e-13));

    auto s = [](double x) { return std::sin(x); };
    CHECK(quad::integrate(s, 0.0, std::numbers::pi, spec).value ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("semi-infinite map: Lorentzian and Gaussian tails") {
    quad::QuadratureSpec spec;
    auto lorentz = [](double x) { return 1.0 / (1.0 + x * x); };
    CHECK(quad::integrate_semi_infinite(lorentz, 1.0, spec).value ==
          doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-11));

    auto gauss = [](double x) { return std::exp(-x * x); };
    CHECK(quad::integrate_semi_infinite(gauss, 1.0, spec).value ==
          doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-11));
}

TEST_CASE("exponential-decay march with geometric tail") {
    quad::QuadratureSpec spec;
    auto f = [](double t) { return t * t * std::exp(-t); };
    const auto r = quad::integrate_exp_decay(f, 0.0, 3.0, spec);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10)); // Gamma(3)
    CHECK(r.error >= 0.0);

    // shifted start: Int_2^inf t^2 e^-t = e^-2 (4 + 4 + 2) = 10 e^-2
    const auto r2 = quad::integrate_exp_decay(f, 2.0, 3.0, spec);
    CHECK(r2.value == doctest::Approx(10.0 * std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("spec validation") {
    quad::QuadratureSpec spec;
    spec.max_panel_depth = 2;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = {};
    spec.rel_tol = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("deterministic: same input twice gives identical bits") {
    quad::QuadratureSpec spec;
    auto f = [](double x) { return std::exp(-x) * std::cos(7.0 * x); };
    const double a = quad::integrate(f, 0.0, 30.0, spec).value;
    const double b = quad::integrate(f, 0.0, 30.0, spec).value;
    CHECK(a == b);
}
