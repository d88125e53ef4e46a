#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tilq/discount.hpp"
#include "tilq/rng.hpp"

using namespace tilq;

namespace {
const DiscountSpec kMix = DiscountSpec::mixture(0.5, 0.15, 0.3);
const DiscountSpec kExp = DiscountSpec::exponential(0.15);
}  // namespace

TEST_CASE("alpha values") {
  CHECK(alpha(kMix, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  // 0.5 e^{-1.5} + 0.5 e^{-3}
  CHECK(alpha(kMix, 10.0) == doctest::Approx(0.13645861425814687).epsilon(1e-12));
  const DiscountSpec near_exp = DiscountSpec::mixture(1.0 - 1e-12, 0.15, 0.3);
  for (double t : {0.0, 1.0, 5.0, 20.0})
    CHECK(std::abs(alpha(near_exp, t) - std::exp(-0.15 * t)) < 1e-12);
  CHECK_THROWS_AS(alpha(kMix, -0.1), std::domain_error);
}

TEST_CASE("alpha derivative") {
  CHECK(alpha_derivative(kExp, 0.0) == doctest::Approx(-0.15).epsilon(1e-15));
  CHECK(alpha_derivative(kMix, 0.0) == doctest::Approx(-0.225).epsilon(1e-14));
  CHECK(std::abs(alpha_derivative(kMix, 200.0)) < 1e-10);
  CHECK_THROWS_AS(alpha_derivative(kExp, -1e-9), std::domain_error);

  // central finite difference agrees to O(h^2)
  const double h = 1e-5;
  for (double t : {0.5, 2.0, 7.5, 30.0}) {
    const double fd = (alpha(kMix, t + h) - alpha(kMix, t - h)) / (2.0 * h);
    CHECK(std::abs(fd - alpha_derivative(kMix, t)) < 1e-9);
  }
}

TEST_CASE("implied rate") {
  CHECK(implied_rate(kMix, 0.0) == doctest::Approx(0.225).epsilon(1e-14));
  CHECK(short_rate(kMix) == doctest::Approx(0.225).epsilon(1e-14));
  for (double t : {0.0, 3.0, 11.0}) CHECK(implied_rate(kExp, t) == doctest::Approx(0.15));
  // long-run limit is rho
  CHECK(implied_rate(kMix, 200.0) == doctest::Approx(0.15).epsilon(1e-12));

  // rate stays inside [rho, short_rate] and declines
  double prev = implied_rate(kMix, 0.0);
  for (int i = 1; i <= 60; ++i) {
    const double r = implied_rate(kMix, i * 0.5);
    CHECK(r <= prev + 1e-15);
    CHECK(r >= kMix.rho - 1e-15);
    CHECK(r <= short_rate(kMix) + 1e-15);
    prev = r;
  }
}

TEST_CASE("monotonicity and bracketing on random grids") {
  for (int i = 0; i < 50; ++i) {
    const double t1 = 40.0 * uniform_at(7, 1, i);
    const double t2 = t1 + 1e-6 + 40.0 * uniform_at(7, 2, i);
    CHECK(alpha(kMix, t1) > alpha(kMix, t2));
    CHECK(alpha(kMix, t1) > 0.0);
    CHECK(alpha(kMix, t1) <= std::exp(-kMix.rho * t1) + 1e-15);
    CHECK(alpha(kMix, t1) >= std::exp(-kMix.gamma * t1) - 1e-15);
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(DiscountSpec::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DiscountSpec::exponential(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(DiscountSpec::mixture(0.0, 0.15, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(DiscountSpec::mixture(1.0, 0.15, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(DiscountSpec::mixture(0.5, 0.3, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(DiscountSpec::mixture(0.5, -0.1, 0.3), std::invalid_argument);
  CHECK_NOTHROW(DiscountSpec::mixture(1.0 - 1e-12, 0.15, 0.3));
}
