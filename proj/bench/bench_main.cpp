// Serial vs OpenMP timings for the data-parallel kernels: Monte Carlo path
// generation, kernel reconstruction, and the spike-variation sweep. Each
// pair is also checked for bit-identical output. The backward partition
// recursion itself is sequential by construction and is timed for scale.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tilq/equilibrium.hpp"
#include "tilq/evaluate.hpp"
#include "tilq/grid.hpp"
#include "tilq/simulate.hpp"

using namespace tilq;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool identical) {
  std::printf("  %-28s serial %7.3fs   parallel %7.3fs   speedup %4.2fx   %s\n", name, serial,
              parallel, serial / parallel, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#pragma omp parallel
  {
  }  // spin up the thread pool before timing
#else
  std::printf("built without OpenMP; parallel policy falls back to serial\n");
#endif

  ModelParams p;
  p.horizon = 10.0;
  p.sigma = 0.25;
  p.effort_cost_ratio = 0.5;
  p.discount = DiscountSpec::mixture(0.5, 0.15, 0.3);

  {
    const double t = best_of(2, [&] {
      (void)game_partition_solve(p, Partition::uniform(p.horizon, 2000), 8);
    });
    std::printf("  %-28s %7.3fs (sequential backward recursion)\n",
                "partition solve (N=2000)", t);
  }

  const auto sol = game_partition_solve(p, Partition::uniform(p.horizon, 500), 8);
  const ClosedLoopPair pair{sol.theta1, sol.theta2};

  {
    const SimConfig cfg{200000, 500, 42, 1.0};
    PathEnsemble a, b;
    const double ts =
        best_of(2, [&] { a = simulate_closed_loop(pair, p, cfg, ExecutionPolicy::serial); });
    const double tp =
        best_of(2, [&] { b = simulate_closed_loop(pair, p, cfg, ExecutionPolicy::parallel); });
    report("monte carlo (2e5 x 500)", ts, tp, a.states == b.states);
  }

  {
    const auto gamma = vdie_solve(p, linspace(0.0, p.horizon, 16001));
    TriangularKernel a, b;
    const double ts =
        best_of(3, [&] { a = reconstruct_kernel(gamma, p, 8, ExecutionPolicy::serial); });
    const double tp =
        best_of(3, [&] { b = reconstruct_kernel(gamma, p, 8, ExecutionPolicy::parallel); });
    report("kernel reconstruction", ts, tp, a.rows == b.rows);
  }

  {
    std::vector<SpikeCase> cases;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        cases.push_back({0.5 + i, 0.1, -2.0 + 0.4 * j, (j % 2) ? Player::one : Player::two});
    std::vector<double> a, b;
    const double ts = best_of(2, [&] {
      a = spike_quotients(cases, pair, p, SpikeObjective::game_value,
                          DeviationMode::proportional, 1.0, EvalOptions{}, false);
    });
    const double tp = best_of(2, [&] {
      b = spike_quotients(cases, pair, p, SpikeObjective::game_value,
                          DeviationMode::proportional, 1.0, EvalOptions{}, true);
    });
    report("spike sweep (64 cases)", ts, tp, a == b);
  }
  return 0;
}
