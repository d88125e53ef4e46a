#include <doctest.h>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tilq/equilibrium.hpp"
#include "tilq/grid.hpp"
#include "tilq/riccati.hpp"
#include "tilq/rng.hpp"

using namespace tilq;

namespace {

ModelParams baseline() {
  ModelParams p;
  p.horizon = 10.0;
  p.sigma = 0.25;
  p.effort_cost_ratio = 0.5;
  p.discount = DiscountSpec::exponential(0.15);
  return p;
}

// independent oracle: direct backward RK4 of y' = f(s, y), y(T) = 1
std::vector<double> rk4(double horizon, int n, const std::function<double(double, double)>& f) {
  std::vector<double> y(n + 1);
  y[n] = 1.0;
  const double h = horizon / n;
  for (int i = n; i > 0; --i) {
    const double s = horizon * i / n;
    const double k1 = f(s, y[i]);
    const double k2 = f(s - 0.5 * h, y[i] - 0.5 * h * k1);
    const double k3 = f(s - 0.5 * h, y[i] - 0.5 * h * k2);
    const double k4 = f(s - h, y[i] - h * k3);
    y[i - 1] = y[i] - h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace

TEST_CASE("single constant gain closed form") {
  const ModelParams p = baseline();
  CHECK(single_constant_gain(p, p.horizon) == doctest::Approx(-2.0).epsilon(1e-13));
  // frozen independent arithmetic at s = 0
  CHECK(single_constant_gain(p, 0.0) == doctest::Approx(-0.05818491958190603).epsilon(1e-12));

  // RK4 re-derivation of the underlying Riccati equation
  const int n = 10000;
  const double sig2 = p.sigma * p.sigma, rho = 0.15, R = 0.5;
  const auto pr = rk4(p.horizon, n, [&](double, double y) { return (rho - sig2) * y + y * y / R; });
  double sup = 0.0;
  for (int i = 0; i <= n; ++i)
    sup = std::max(sup,
                   std::abs(single_constant_gain(p, p.horizon * i / n) - (-pr[i] / R)));
  CHECK(sup <= 1e-8);

  CHECK_THROWS_AS(single_constant_gain(p, -0.01), std::domain_error);
  CHECK_THROWS_AS(single_constant_gain(p, p.horizon + 0.01), std::domain_error);
}

TEST_CASE("degenerate rate rho = sigma^2") {
  ModelParams p = baseline();
  p.discount = DiscountSpec::exponential(0.0625);  // sigma^2
  for (double s : {0.0, 2.5, 7.0, 10.0})
    CHECK(single_constant_gain(p, s) == doctest::Approx(-1.0 / (0.5 + 10.0 - s)).epsilon(1e-13));

  // continuity across the degeneracy
  for (double off : {-1e-6, 1e-6}) {
    ModelParams q = baseline();
    q.discount = DiscountSpec::exponential(0.0625 + off);
    for (double s : {0.0, 5.0, 9.5}) {
      CHECK(std::abs(single_constant_gain(q, s) - single_constant_gain(p, s)) < 1e-4);
      CHECK(std::abs(game_constant_gains(q, s).second - game_constant_gains(p, s).second) < 1e-4);
    }
  }
  // game limit solves P' = ((1-R)/R) P^2, P(T)=1
  for (double s : {0.0, 4.0, 10.0}) {
    const double expect = 0.5 / (0.5 + 0.5 * (10.0 - s));
    CHECK(game_constant_gains(p, s).first == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("game constant gains closed form") {
  const ModelParams p = baseline();
  const auto [g1T, g2T] = game_constant_gains(p, p.horizon);
  CHECK(g1T == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(g2T == doctest::Approx(-2.0).epsilon(1e-13));
  const auto [g10, g20] = game_constant_gains(p, 0.0);
  CHECK(g10 == doctest::Approx(0.05438914554821937).epsilon(1e-12));
  CHECK(g20 == doctest::Approx(-0.10877829109643875).epsilon(1e-12));

  const int n = 10000;
  const double sig2 = p.sigma * p.sigma, rho = 0.15, R = 0.5;
  const auto pr = rk4(p.horizon, n,
                      [&](double, double y) { return (rho - sig2) * y + (1.0 - R) / R * y * y; });
  double sup = 0.0;
  for (int i = 0; i <= n; ++i) {
    const auto [g1, g2] = game_constant_gains(p, p.horizon * i / n);
    sup = std::max({sup, std::abs(g1 - pr[i]), std::abs(g2 + pr[i] / R)});
  }
  CHECK(sup <= 1e-8);
}

TEST_CASE("symmetric game R = 1") {
  // At R = 1 the quadratic term of the Riccati equation vanishes, so
  // P' = (rho - sigma^2) P with P(T) = 1, i.e. P(s) = e^{(rho-sigma^2)(s-T)}.
  ModelParams p = baseline();
  p.effort_cost_ratio = 1.0;
  const double b = 0.15 - 0.0625;
  for (double s : {0.0, 3.0, 10.0}) {
    const double expect = std::exp(b * (s - 10.0));
    const auto [g1, g2] = game_constant_gains(p, s);
    CHECK(g1 == doctest::Approx(expect).epsilon(1e-13));
    CHECK(g2 == doctest::Approx(-expect).epsilon(1e-13));
  }
}

TEST_CASE("saddle identity theta1 = -R theta2") {
  const ModelParams p = baseline();
  for (double s : {0.0, 1.7, 6.2, 10.0}) {
    const auto [g1, g2] = game_constant_gains(p, s);
    CHECK(g1 + p.effort_cost_ratio * g2 == 0.0);  // R = 0.5 is dyadic
  }
  for (int i = 0; i < 20; ++i) {
    ModelParams q = baseline();
    q.effort_cost_ratio = 0.1 + 0.9 * uniform_at(11, 3, i);
    const double s = 10.0 * uniform_at(11, 4, i);
    const auto [g1, g2] = game_constant_gains(q, s);
    CHECK(std::abs(g1 + q.effort_cost_ratio * g2) <= 4e-16 * std::max(1.0, std::abs(g1)));
  }
}

TEST_CASE("game intensifies lobbying") {
  const ModelParams p = baseline();
  for (int i = 0; i <= 200; ++i) {
    const double s = p.horizon * i / 200;
    CHECK(std::abs(game_constant_gains(p, s).second) >=
          std::abs(single_constant_gain(p, s)) - 1e-12);
  }
}

TEST_CASE("auxiliary riccati solver") {
  const ModelParams p = baseline();
  const double R = p.effort_cost_ratio;
  const auto grid = linspace(0.0, p.horizon, 10001);

  SUBCASE("reproduces the constant-discount game closed form") {
    AuxiliaryGameSpec spec;
    spec.terminal_weight = 1.0;
    spec.cost1 = [](double) { return -1.0; };
    spec.cost2 = [R](double) { return R; };
    spec.rate = 0.15;
    const auto sol = solve_auxiliary_riccati(spec, p.sigma, p.horizon, grid);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto [g1, g2] = game_constant_gains(p, grid[i]);
      sup = std::max({sup, std::abs(-sol[i] / spec.cost1(grid[i]) - g1),
                      std::abs(-sol[i] / spec.cost2(grid[i]) - g2)});
    }
    CHECK(sup <= 1e-8);
  }

  SUBCASE("zero terminal weight gives the zero solution") {
    AuxiliaryGameSpec spec;
    spec.terminal_weight = 0.0;
    spec.cost1 = [](double) { return -1.0; };
    spec.cost2 = [R](double) { return R; };
    spec.rate = 0.15;
    for (double v : solve_auxiliary_riccati(spec, p.sigma, p.horizon, grid)) CHECK(v == 0.0);
  }

  SUBCASE("R = 1 collapses to the linear Lyapunov equation") {
    AuxiliaryGameSpec spec;
    spec.terminal_weight = 1.0;
    spec.cost1 = [](double) { return -1.0; };
    spec.cost2 = [](double) { return 1.0; };
    spec.rate = 0.15;
    const auto sol = solve_auxiliary_riccati(spec, p.sigma, p.horizon, grid);
    const double sig2 = p.sigma * p.sigma;
    for (std::size_t i = 0; i < grid.size(); i += 500)
      CHECK(sol[i] ==
            doctest::Approx(std::exp((sig2 - 0.15) * (p.horizon - grid[i]))).epsilon(1e-11));
  }

  SUBCASE("per-subinterval precommitment game: envelope and recursion cross-check") {
    // rate 0 with costs -alpha(s), alpha(s) R and terminal alpha(T): the
    // game each self solves on a fresh subinterval starting at 0
    const DiscountSpec mix = DiscountSpec::mixture(0.5, 0.15, 0.3);
    AuxiliaryGameSpec spec;
    spec.terminal_weight = alpha(mix, p.horizon);
    spec.cost1 = [&](double s) { return -alpha(mix, s); };
    spec.cost2 = [&, R](double s) { return alpha(mix, s) * R; };
    spec.rate = 0.0;
    const auto sol = solve_auxiliary_riccati(spec, p.sigma, p.horizon, grid);
    const double sig2 = p.sigma * p.sigma;
    for (std::size_t i = 0; i < grid.size(); i += 100) {
      CHECK(sol[i] >= -1e-12);
      CHECK(sol[i] <= spec.terminal_weight * std::exp(sig2 * (p.horizon - grid[i])) + 1e-10);
    }
    // a one-interval partition solve runs exactly this game through the
    // reciprocal formula; the two integrators must agree
    ModelParams mp = p;
    mp.discount = mix;
    const auto part = game_partition_solve(mp, Partition::uniform(p.horizon, 1), 2000);
    CHECK(std::abs(part.kernel.at_nodes(0, 0) - sol.front()) <= 1e-6);
  }

  SUBCASE("violated sign condition is detected as blow-up") {
    AuxiliaryGameSpec spec;
    spec.terminal_weight = 1.0;
    spec.cost1 = [](double) { return -0.1; };  // |R1| < R2 flips the quadratic sign
    spec.cost2 = [](double) { return 1.0; };
    spec.rate = 0.0;
    CHECK_THROWS_AS(solve_auxiliary_riccati(spec, p.sigma, p.horizon, grid), SolverError);
  }

  SUBCASE("sign preconditions are validated") {
    AuxiliaryGameSpec spec;
    spec.terminal_weight = 1.0;
    spec.cost1 = [](double) { return 1.0; };  // must be negative
    spec.cost2 = [](double) { return 1.0; };
    spec.rate = 0.0;
    CHECK_THROWS_AS(solve_auxiliary_riccati(spec, p.sigma, p.horizon, grid),
                    std::invalid_argument);
  }
}

TEST_CASE("lyapunov envelope") {
  CHECK(lyapunov_envelope(0.25, 10.0, 10.0) == 1.0);
  CHECK(lyapunov_envelope(0.0, 10.0, 3.0) == 1.0);
  CHECK(lyapunov_envelope(0.25, 10.0, 0.0) == doctest::Approx(1.8682459574322223).epsilon(1e-14));
  CHECK_THROWS_AS(lyapunov_envelope(0.25, 10.0, -1.0), std::domain_error);
}

TEST_CASE("params validation") {
  ModelParams p = baseline();
  p.effort_cost_ratio = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = baseline();
  p.horizon = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = baseline();
  p.effort_cost_ratio = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  ModelParams mix = baseline();
  mix.discount = DiscountSpec::exponential(0.15);
  CHECK_NOTHROW(mix.validate());
}
