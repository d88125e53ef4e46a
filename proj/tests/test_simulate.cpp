#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tilq/csv.hpp"
#include "tilq/equilibrium.hpp"
#include "tilq/rng.hpp"
#include "tilq/simulate.hpp"

using namespace tilq;

namespace {

ModelParams mixture_baseline() {
  ModelParams p;
  p.horizon = 10.0;
  p.sigma = 0.25;
  p.effort_cost_ratio = 0.5;
  p.discount = DiscountSpec::mixture(0.5, 0.15, 0.3);
  return p;
}

StrategyCurve constant_curve(double horizon, double value) {
  return StrategyCurve{{0.0, horizon}, {value, value}};
}

}  // namespace

TEST_CASE("philox stream properties") {
  // pure function of (key, counter)
  CHECK(philox4x32(42, 1, 2) == philox4x32(42, 1, 2));
  CHECK(philox4x32(42, 1, 2) != philox4x32(43, 1, 2));
  CHECK(philox4x32(42, 1, 2) != philox4x32(42, 2, 2));
  CHECK(normal_at(42, 0, 0) == normal_at(42, 0, 0));
  CHECK(normal_at(42, 0, 0) != normal_at(42, 0, 1));
  // uniforms land strictly inside (0, 1)
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform_at(9, 5, i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  // crude moment sanity for the normal draw
  double m1 = 0.0, m2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = normal_at(1234, 7, i);
    m1 += z;
    m2 += z * z;
  }
  m1 /= n;
  m2 /= n;
  CHECK(std::abs(m1) < 0.01);
  CHECK(std::abs(m2 - 1.0) < 0.02);
}

TEST_CASE("degenerate dynamics") {
  ModelParams p = mixture_baseline();
  p.sigma = 0.0;

  SUBCASE("no volatility, no feedback: constant paths") {
    const auto ens = simulate_closed_loop(ClosedLoopPair::zero(p.horizon), p,
                                          SimConfig{5, 16, 7, 1.3});
    for (int q = 0; q < 5; ++q)
      for (int k = 0; k <= 16; ++k) CHECK(ens.state(q, k) == 1.3);
  }

  SUBCASE("no volatility, constant total feedback: exponential growth") {
    const ClosedLoopPair pair{constant_curve(p.horizon, 0.2), constant_curve(p.horizon, 0.1)};
    const auto ens = simulate_closed_loop(pair, p, SimConfig{3, 400, 7, 1.0});
    for (int q = 0; q < 3; ++q)
      CHECK(ens.state(q, 400) == doctest::Approx(std::exp(0.3 * 10.0)).epsilon(1e-12));
  }

  SUBCASE("zero initial state is absorbing") {
    ModelParams noisy = mixture_baseline();
    const auto ens = simulate_closed_loop(ClosedLoopPair::zero(noisy.horizon), noisy,
                                          SimConfig{4, 32, 11, 0.0});
    for (int q = 0; q < 4; ++q)
      for (int k = 0; k <= 32; ++k) CHECK(ens.state(q, k) == 0.0);
  }
}

TEST_CASE("second moment of the driftless ensemble") {
  const ModelParams p = mixture_baseline();
  const SimConfig cfg{100000, 200, 2024, 1.0};
  const auto ens = simulate_closed_loop(ClosedLoopPair::zero(p.horizon), p, cfg);
  double mean = 0.0, ss = 0.0;
  for (int q = 0; q < cfg.n_paths; ++q) {
    const double x = ens.state(q, cfg.n_steps);
    mean += x * x;
  }
  mean /= cfg.n_paths;
  for (int q = 0; q < cfg.n_paths; ++q) {
    const double v = ens.state(q, cfg.n_steps) * ens.state(q, cfg.n_steps) - mean;
    ss += v * v;
  }
  const double se = std::sqrt(ss / (cfg.n_paths - 1.0) / cfg.n_paths);
  const double expect = std::exp(p.sigma * p.sigma * p.horizon);
  CHECK(std::abs(mean - expect) <= 3.0 * se);
}

TEST_CASE("bitwise reproducibility") {
  const ModelParams p = mixture_baseline();
  const auto sol = game_partition_solve(p, Partition::uniform(p.horizon, 200), 4);
  const ClosedLoopPair pair{sol.theta1, sol.theta2};
  const SimConfig cfg{500, 100, 99, 1.0};
  const auto a = simulate_closed_loop(pair, p, cfg, ExecutionPolicy::parallel);
  const auto b = simulate_closed_loop(pair, p, cfg, ExecutionPolicy::parallel);
  const auto c = simulate_closed_loop(pair, p, cfg, ExecutionPolicy::serial);
  REQUIRE(a.states.size() == b.states.size());
  REQUIRE(a.states.size() == c.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    CHECK(a.states[i] == b.states[i]);
    CHECK(a.states[i] == c.states[i]);
  }
  const auto d = simulate_closed_loop(pair, p, SimConfig{500, 100, 100, 1.0});
  CHECK(d.states != a.states);
}

TEST_CASE("monte carlo value") {
  const ModelParams p = mixture_baseline();

  SUBCASE("zero strategies, zero volatility: exact discount weight") {
    ModelParams q = p;
    q.sigma = 0.0;
    const auto ens = simulate_closed_loop(ClosedLoopPair::zero(q.horizon), q,
                                          SimConfig{8, 50, 3, 1.0});
    const auto v = monte_carlo_value(ens, q, 0.0);
    CHECK(v.estimate == alpha(q.discount, q.horizon));
    CHECK(v.std_error == 0.0);
  }

  SUBCASE("agrees with the Lyapunov evaluator at the equilibrium") {
    const auto sol = game_partition_solve(p, Partition::uniform(p.horizon, 500), 8);
    const ClosedLoopPair pair{sol.theta1, sol.theta2};
    const auto ens = simulate_closed_loop(pair, p, SimConfig{20000, 500, 321, 1.0});
    const auto v = monte_carlo_value(ens, p, 0.0);
    const double expect = closed_loop_value(0.0, pair, p).p;
    CHECK(std::abs(v.estimate - expect) <= 3.0 * v.std_error);
    CHECK(pathwise_zero_sum_max_residual(ens, p, 0.0) == 0.0);
  }

  SUBCASE("anchor time must match the ensemble") {
    const auto ens = simulate_closed_loop(ClosedLoopPair::zero(p.horizon), p,
                                          SimConfig{2, 10, 5, 1.0});
    CHECK_THROWS_AS(monte_carlo_value(ens, p, 0.5), std::domain_error);
  }

  SUBCASE("doubling xi quadruples the functional exactly") {
    const auto sol = game_partition_solve(p, Partition::uniform(p.horizon, 200), 4);
    const ClosedLoopPair pair{sol.theta1, sol.theta2};
    const auto e1 = simulate_closed_loop(pair, p, SimConfig{300, 100, 17, 1.0});
    const auto e2 = simulate_closed_loop(pair, p, SimConfig{300, 100, 17, 2.0});
    // the log scheme is multiplicative and scaling by 2 is exact in binary
    CHECK(monte_carlo_value(e2, p, 0.0).estimate == 4.0 * monte_carlo_value(e1, p, 0.0).estimate);
  }

  SUBCASE("agrees with the Lyapunov evaluator across a parameter sweep") {
    for (int i = 0; i < 10; ++i) {
      ModelParams q;
      q.horizon = 4.0 + 8.0 * uniform_at(77, i, 0);
      q.sigma = 0.05 + 0.4 * uniform_at(77, i, 1);
      q.effort_cost_ratio = 0.2 + 0.8 * uniform_at(77, i, 2);
      const double rho = 0.05 + 0.2 * uniform_at(77, i, 3);
      q.discount = DiscountSpec::mixture(0.1 + 0.8 * uniform_at(77, i, 4), rho,
                                         rho + 0.05 + 0.3 * uniform_at(77, i, 5));
      const auto sol = game_partition_solve(q, Partition::uniform(q.horizon, 300), 4);
      const ClosedLoopPair pair{sol.theta1, sol.theta2};
      const auto ens = simulate_closed_loop(pair, q, SimConfig{4000, 400, 500 + (std::uint64_t)i, 1.0});
      const auto v = monte_carlo_value(ens, q, 0.0);
      const double expect = closed_loop_value(0.0, pair, q).p;
      CHECK(std::abs(v.estimate - expect) <= 3.0 * v.std_error);
    }
  }
}

TEST_CASE("monte carlo error shrinks like one over sqrt paths") {
  const ModelParams p = mixture_baseline();
  const double expect = std::exp(p.sigma * p.sigma * p.horizon);
  const int sizes[] = {100, 1000, 10000, 100000};
  double logn[4], logerr[4];
  for (int si = 0; si < 4; ++si) {
    double err = 0.0;
    const int reps = 4;
    for (int rep = 0; rep < reps; ++rep) {
      const SimConfig cfg{sizes[si], 100, 7000 + static_cast<std::uint64_t>(rep), 1.0};
      const auto ens = simulate_closed_loop(ClosedLoopPair::zero(p.horizon), p, cfg);
      double mean = 0.0;
      for (int q = 0; q < cfg.n_paths; ++q)
        mean += ens.state(q, cfg.n_steps) * ens.state(q, cfg.n_steps);
      mean /= cfg.n_paths;
      err += std::abs(mean - expect);
    }
    logn[si] = std::log10(static_cast<double>(sizes[si]));
    logerr[si] = std::log10(err / reps);
  }
  // least-squares slope over three decades
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < 4; ++i) {
    sx += logn[i];
    sy += logerr[i];
    sxx += logn[i] * logn[i];
    sxy += logn[i] * logerr[i];
  }
  const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  CHECK(slope <= -0.35);
  CHECK(slope >= -0.65);
}

TEST_CASE("ensemble csv dump") {
  const ModelParams p = mixture_baseline();
  const ClosedLoopPair pair{constant_curve(p.horizon, 0.2), constant_curve(p.horizon, -0.4)};
  const auto ens = simulate_closed_loop(pair, p, SimConfig{2, 3, 13, 1.0});
  std::ostringstream out;
  write_ensemble_csv(ens, out);
  std::istringstream in(out.str());
  const auto table = read_csv(in);
  REQUIRE(table.header.size() == 6);
  CHECK(table.header[0] == "path");
  CHECK(table.header[5] == "u2");
  REQUIRE(table.n_rows() == 2 * 4);
  // u2 column reproduces theta2 * state exactly
  CHECK(table.columns[5][0] == -0.4 * ens.state(0, 0));
  CHECK(table.columns[3][0] == 1.0);
}

TEST_CASE("config validation") {
  const ModelParams p = mixture_baseline();
  CHECK_THROWS_AS(simulate_closed_loop(ClosedLoopPair::zero(p.horizon), p, SimConfig{0, 10, 1, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_closed_loop(ClosedLoopPair::zero(p.horizon), p, SimConfig{10, 0, 1, 1.0}),
                  std::invalid_argument);
}
