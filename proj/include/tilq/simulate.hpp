#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tilq/equilibrium.hpp"
#include "tilq/evaluate.hpp"

namespace tilq {

struct SimConfig {
  int n_paths = 10000;
  int n_steps = 1000;
  std::uint64_t seed = 42;
  double xi = 1.0;
};

// Monte Carlo ensemble of the closed-loop state. states is n_paths rows of
// n_steps+1 values; controls are reconstructed from the stored per-node
// gains as u_i(t_k) = theta_i(t_k) X(t_k). Identical (seed, n_paths,
// n_steps) give bit-identical ensembles regardless of thread count.
struct PathEnsemble {
  std::vector<double> times;
  int n_paths = 0;
  int n_steps = 0;
  double xi = 1.0;
  std::vector<double> states;       // n_paths * (n_steps + 1), path-major
  std::vector<double> gain1_nodes;  // theta1 at times
  std::vector<double> gain2_nodes;  // theta2 at times

  double state(int path, int step) const { return states[static_cast<std::size_t>(path) * (n_steps + 1) + step]; }
  double control(int path, int step, Player who) const;
};

// Exact-in-distribution log stepping of the linear SDE: per step
//   X_{k+1} = X_k exp( (thetabar_k - sigma^2/2) dt + sigma sqrt(dt) Z_k ),
// with thetabar_k the total feedback theta1 + theta2 frozen at the step
// midpoint and Z_k drawn from the path's counter-based stream.
PathEnsemble simulate_closed_loop(const ClosedLoopPair& pair, const ModelParams& params,
                                  const SimConfig& cfg,
                                  ExecutionPolicy policy = ExecutionPolicy::parallel);

struct McValue {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Sample mean and standard error of player 1's functional over the
// ensemble: terminal term alpha(T - t) X(T)^2 plus the trapezoid of
// alpha(s - t)(-u1^2 + R u2^2) along each path. t must equal the
// ensemble's initial time.
McValue monte_carlo_value(const PathEnsemble& ensemble, const ModelParams& params, double t);

// max over paths of |J1 + J2| with both functionals evaluated pathwise by
// mirrored arithmetic; exactly zero by sign symmetry of the integrands.
double pathwise_zero_sum_max_residual(const PathEnsemble& ensemble, const ModelParams& params,
                                      double t);

// CSV dump with header path,step,time,state,u1,u2.
void write_ensemble_csv(const PathEnsemble& ensemble, std::ostream& out);

}  // namespace tilq
