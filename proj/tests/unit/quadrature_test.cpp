#include <doctest.h>

#include <cmath>

#include "twotier/errors.hpp"
#include "twotier/quadrature.hpp"

using namespace twotier;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("embedded rule reproduces exact integrals") {
  double err = 0.0;
  // Constants integrate to the interval length.
  CHECK(gauss_kronrod_15([](double) { return 1.0; }, -1.0, 1.0, &err) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(err < 1e-14);
  // Low-degree polynomials are exact for both embedded rules.
  CHECK(gauss_kronrod_15([](double x) { return x * x * x; }, 0.0, 1.0, &err) ==
        doctest::Approx(0.25).epsilon(1e-14));
  CHECK(err < 1e-14);
  // Smooth transcendental on one panel.
  CHECK(gauss_kronrod_15([](double x) { return std::exp(x); }, 0.0, 1.0, &err) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("adaptive integration meets tolerance and handles endpoint blowups") {
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 10.0, 1e-12) ==
        doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-11));
  // Integrable singularity at the origin; the open rule never samples it.
  // (Error decays like sqrt(panel width) there, so ask for a tolerance the
  // refinement depth can actually reach.)
  CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-6) ==
        doctest::Approx(2.0).epsilon(1e-5));
  // Oscillatory but resolvable.
  CHECK(integrate([](double x) { return std::sin(10.0 * x); }, 0.0, M_PI, 1e-12) ==
        doctest::Approx((1.0 - std::cos(10.0 * M_PI)) / 10.0).epsilon(1e-9));
}

TEST_CASE("domain and refinement failures are reported as typed errors") {
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, 0.0), DomainError);
  CHECK(integrate([](double x) { return x; }, 2.0, 2.0) == 0.0);
  // A singular integrand with a starved refinement budget must refuse
  // rather than return a bad number.
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0,
                            1.0, 1e-10, 3),
                  QuadratureFailure);
}

TEST_CASE("legendre nodes and weights match published 5-point values") {
  const GaussLegendre rule(5);
  REQUIRE(rule.nodes.size() == 5);
  CHECK(rule.nodes[0] == doctest::Approx(-0.9061798459386640).epsilon(1e-13));
  CHECK(rule.nodes[1] == doctest::Approx(-0.5384693101056831).epsilon(1e-13));
  CHECK(rule.nodes[2] == doctest::Approx(0.0));
  CHECK(rule.nodes[3] == doctest::Approx(0.5384693101056831).epsilon(1e-13));
  CHECK(rule.nodes[4] == doctest::Approx(0.9061798459386640).epsilon(1e-13));
  CHECK(rule.weights[0] == doctest::Approx(0.23692688505618908).epsilon(1e-13));
  CHECK(rule.weights[1] == doctest::Approx(0.47862867049936647).epsilon(1e-13));
  CHECK(rule.weights[2] == doctest::Approx(0.5688888888888889).epsilon(1e-13));
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("an n-point legendre rule is exact through degree 2n-1") {
  const GaussLegendre rule(5);
  // x^8 integrates to 2/9 on [-1, 1]; degree 8 <= 9 is inside the exactness.
  CHECK(rule.apply([](double x) { return std::pow(x, 8); }, -1.0, 1.0) ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-13));
  CHECK(rule.apply([](double x) { return std::pow(x, 9); }, -1.0, 1.0) ==
        doctest::Approx(0.0));
  // Affine mapping to a general interval.
  CHECK(rule.apply([](double x) { return x * x; }, 0.0, 2.0) ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-13));
  // Degree 10 is outside and must show a visible error; guards against a
  // rule that silently over-claims.
  const double approx10 = rule.apply([](double x) { return std::pow(x, 10); },
                                     -1.0, 1.0);
  CHECK(std::abs(approx10 - 2.0 / 11.0) > 1e-6);
}

TEST_SUITE_END();
