#pragma once

#include <span>
#include <vector>

#include "tilq/riccati.hpp"

namespace tilq {

// A pair of feedback strategies sharing a grid on [0, T]. Single-player
// problems set theta1 identically to zero.
struct ClosedLoopPair {
  StrategyCurve theta1;
  StrategyCurve theta2;

  static ClosedLoopPair single_player(StrategyCurve theta2);
  static ClosedLoopPair zero(double horizon);
  void validate(double horizon) const;
};

// Quadratic coefficient of the closed-loop value anchored at time t:
// J(t, xi) = p * xi^2 by homogeneity of the state equation and costs.
struct ValueCoefficient {
  double p = 0.0;
  double anchor_time = 0.0;
};

struct EvalOptions {
  // Fixed RK4 step density for the backward value ODEs.
  int steps_per_unit_time = 800;
};

// Player 1's functional along the pair, per unit xi^2: backward solve of
//   Pv' + 2 Pv (theta1 + theta2) + sigma^2 Pv
//       + alpha(s - t) [ -theta1(s)^2 + R theta2(s)^2 ] = 0,  Pv(T) = alpha(T - t).
ValueCoefficient closed_loop_value(double t, const ClosedLoopPair& pair,
                                   const ModelParams& params, const EvalOptions& opts = {});

// J1 + J2 computed by two mirrored Lyapunov solves. The second problem is
// the exact sign-flip of the first, so the residual is zero to machine
// precision; any nonzero return is pure rounding.
double zero_sum_residual(double t, const ClosedLoopPair& pair, const ModelParams& params,
                         const EvalOptions& opts = {});

enum class Player { one, two };

// Which functional the spike difference quotient is taken in: the game's
// common functional J = J1 (player 1 maximizes, player 2 minimizes), or
// player 2's own objective J2 = -J1 for single-player problems.
enum class SpikeObjective { game_value, single_player_value };

enum class DeviationMode {
  proportional,     // deviation control u_dev * X(s) on [t, t+eps]
  constant_control  // open-loop u_dev on [t, t+eps]; affine value (a,b,c)
};

struct SpikeResult {
  double quotient = 0.0;     // [J(deviated) - J(equilibrium)] / eps, per unit xi^2
  double deviated = 0.0;     // value coefficient along the deviation
  double equilibrium = 0.0;  // value coefficient along the pair
};

// Spike variation: replace `who`s control by the deviation on [t, t+eps],
// resume the pair's feedback on [t+eps, T], and difference the functional.
// The tail value keeps the deviating self's discount argument alpha(. - t).
// For game_value, player-1 quotients have limsup <= 0 and player-2
// quotients >= 0 as eps -> 0 at an equilibrium pair; for
// single_player_value the (player 2) quotient has limsup <= 0.
SpikeResult spike_check(double t, double eps, double u_dev, Player who,
                        const ClosedLoopPair& equilibrium, const ModelParams& params,
                        SpikeObjective objective = SpikeObjective::game_value,
                        DeviationMode mode = DeviationMode::proportional, double xi = 1.0,
                        const EvalOptions& opts = {});

// Two-level Richardson extrapolation of the spike quotient toward eps -> 0:
// 2 q(eps/2) - q(eps).
double spike_quotient_extrapolated(double t, double eps, double u_dev, Player who,
                                   const ClosedLoopPair& equilibrium, const ModelParams& params,
                                   SpikeObjective objective = SpikeObjective::game_value,
                                   DeviationMode mode = DeviationMode::proportional,
                                   double xi = 1.0, const EvalOptions& opts = {});

struct SpikeCase {
  double t;
  double eps;
  double u_dev;
  Player who;
};

// Extrapolated quotients for a batch of spike cases. Cases are independent
// evaluations, fanned out across threads under the parallel policy; output
// order follows the input, so results do not depend on the thread count.
std::vector<double> spike_quotients(std::span<const SpikeCase> cases,
                                    const ClosedLoopPair& equilibrium, const ModelParams& params,
                                    SpikeObjective objective = SpikeObjective::game_value,
                                    DeviationMode mode = DeviationMode::proportional,
                                    double xi = 1.0, const EvalOptions& opts = {},
                                    bool parallel = true);

}  // namespace tilq
