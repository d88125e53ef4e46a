#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "tilq/discount.hpp"
#include "tilq/errors.hpp"

namespace tilq {

// Scalar model: state dX = (u1 + u2) ds + sigma X dW on [0, T], player 1
// maximizing and player 2 minimizing the common quadratic functional with
// control-cost ratio R in (0,1] on player 2's effort.
struct ModelParams {
  double horizon = 10.0;
  double sigma = 0.25;
  double effort_cost_ratio = 0.5;  // R
  DiscountSpec discount = DiscountSpec{DiscountKind::exponential, 0.15, 1.0, 0.0};

  void validate() const;  // throws std::invalid_argument
};

// Feedback gain sampled on an ascending time grid spanning [0, T];
// evaluated between samples by linear interpolation.
struct StrategyCurve {
  std::vector<double> grid;
  std::vector<double> values;

  double at(double s) const;
  double front_time() const { return grid.front(); }
  double back_time() const { return grid.back(); }
  void validate() const;

  static StrategyCurve zero(double horizon);
};

// General constant-rate game with terminal weight G >= 0 and time-varying
// control costs R1(s) < 0 (maximizer) and R2(s) > 0 (minimizer).
struct AuxiliaryGameSpec {
  double terminal_weight = 1.0;                  // G
  std::function<double(double)> cost1;           // R1(s) < 0
  std::function<double(double)> cost2;           // R2(s) > 0
  double rate = 0.0;                             // rho
};

// Optimal feedback gain of the single-player problem (u1 = 0) under
// exponential discounting, evaluated in closed form. Requires an
// exponential discount spec and s in [0, T]. Handles rho = sigma^2 by the
// analytic limit -1/(R + T - s).
double single_constant_gain(const ModelParams& params, double s);

// Closed-loop saddle gains (theta1, theta2) of the zero-sum game under
// exponential discounting. theta1 = -R * theta2 exactly.
std::pair<double, double> game_constant_gains(const ModelParams& params, double s);

// Backward RK4 integration of
//   P'(s) + sigma^2 P - rho P - (R1+R2)/(R1 R2) P^2 = 0,  P(T) = G
// on the caller's grid (ascending, spanning [0, T]). Returns P at the grid
// points. Throws SolverError if |P| exceeds 10x the a-priori envelope,
// which signals a violated sign condition on (R1, R2).
std::vector<double> solve_auxiliary_riccati(const AuxiliaryGameSpec& spec, double sigma,
                                            double horizon, std::span<const double> grid);

// Solution e^{sigma^2 (T - s)} of Xi' + sigma^2 Xi = 0, Xi(T) = 1; the
// a-priori upper bound used by all kernel invariants.
double lyapunov_envelope(double sigma, double horizon, double s);

}  // namespace tilq
