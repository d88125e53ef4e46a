#include "tilq/evaluate.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace tilq {

ClosedLoopPair ClosedLoopPair::single_player(StrategyCurve theta2) {
  theta2.validate();
  StrategyCurve z;
  z.grid = theta2.grid;
  z.values.assign(theta2.grid.size(), 0.0);
  return ClosedLoopPair{std::move(z), std::move(theta2)};
}

ClosedLoopPair ClosedLoopPair::zero(double horizon) {
  return ClosedLoopPair{StrategyCurve::zero(horizon), StrategyCurve::zero(horizon)};
}

void ClosedLoopPair::validate(double horizon) const {
  theta1.validate();
  theta2.validate();
  if (theta1.front_time() > 1e-12 || theta1.back_time() < horizon - 1e-9 ||
      theta2.front_time() > 1e-12 || theta2.back_time() < horizon - 1e-9)
    throw std::invalid_argument("closed-loop pair: strategy grids must cover [0, T]");
}

namespace {

using Fn = std::function<double(double)>;

// RK4 stage times drift a few ulp below the anchor; the discount argument
// is mathematically nonnegative, so clamp it.
inline double alpha_from(const ModelParams& params, double t, double s) {
  return alpha(params.discount, std::max(0.0, s - t));
}

// Backward RK4 for y' = -(drift(s) y + source(s)) from s = b down to s = a.
double rk4_linear_backward(double a, double b, int n_steps, double terminal, const Fn& drift,
                           const Fn& source) {
  const double h = (b - a) / n_steps;
  double y = terminal;
  double s = b;
  for (int i = 0; i < n_steps; ++i) {
    const double sm = s - 0.5 * h;
    const double s0 = s - h;
    const double k1 = -(drift(s) * y + source(s));
    const double k2 = -(drift(sm) * (y - 0.5 * h * k1) + source(sm));
    const double k3 = -(drift(sm) * (y - 0.5 * h * k2) + source(sm));
    const double k4 = -(drift(s0) * (y - h * k3) + source(s0));
    y -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s = s0;
  }
  return y;
}

int step_count(double span, const EvalOptions& opts) {
  const int n = static_cast<int>(std::ceil(span * opts.steps_per_unit_time));
  return std::max(n, 8);
}

// One signed Lyapunov solve of the pair's value on [t, T]: sign = +1 gives
// player 1's functional, sign = -1 the mirrored player-2 problem.
double pair_value(double t, const ClosedLoopPair& pair, const ModelParams& params, double sign,
                  const EvalOptions& opts) {
  const double sig2 = params.sigma * params.sigma;
  const double r_cost = params.effort_cost_ratio;
  const Fn drift = [&](double s) { return 2.0 * (pair.theta1.at(s) + pair.theta2.at(s)) + sig2; };
  const Fn source = [&](double s) {
    const double a1 = pair.theta1.at(s);
    const double a2 = pair.theta2.at(s);
    const double base = alpha_from(params, t, s) * (r_cost * a2 * a2 - a1 * a1);
    return sign < 0 ? -base : base;
  };
  const double terminal = alpha(params.discount, params.horizon - t);
  return rk4_linear_backward(t, params.horizon, step_count(params.horizon - t, opts),
                             sign < 0 ? -terminal : terminal, drift, source);
}

}  // namespace

ValueCoefficient closed_loop_value(double t, const ClosedLoopPair& pair,
                                   const ModelParams& params, const EvalOptions& opts) {
  params.validate();
  pair.validate(params.horizon);
  if (!(t >= 0.0 && t < params.horizon))
    throw std::domain_error("closed_loop_value: t must lie in [0, T)");
  return ValueCoefficient{pair_value(t, pair, params, +1.0, opts), t};
}

double zero_sum_residual(double t, const ClosedLoopPair& pair, const ModelParams& params,
                         const EvalOptions& opts) {
  params.validate();
  pair.validate(params.horizon);
  if (!(t >= 0.0 && t < params.horizon))
    throw std::domain_error("zero_sum_residual: t must lie in [0, T)");
  const double p1 = pair_value(t, pair, params, +1.0, opts);
  const double p2 = pair_value(t, pair, params, -1.0, opts);
  return p1 + p2;
}

namespace {

struct SpikeInputs {
  double t, eps, u_dev, xi;
  Player who;
  DeviationMode mode;
  const ClosedLoopPair* eq;
  const ModelParams* params;
  const EvalOptions* opts;
};

struct SpikeValues {
  double quotient;
  double deviated;
  double equilibrium;
};

// Player 1 objective difference quotient. The tail on [t+eps, T] and the
// equilibrium continuation share one generator so the [t, t+eps] pieces
// are the only difference between the two branches.
SpikeValues spike_quotient_j1(const SpikeInputs& in) {
  const ModelParams& params = *in.params;
  const ClosedLoopPair& eq = *in.eq;
  const double sig2 = params.sigma * params.sigma;
  const double r_cost = params.effort_cost_ratio;
  const double t = in.t;
  const double t_eps = in.t + in.eps;
  const double T = params.horizon;

  const Fn eq_drift = [&](double s) { return 2.0 * (eq.theta1.at(s) + eq.theta2.at(s)) + sig2; };
  // Discount stays anchored at the deviating self's time t on the whole of
  // [t, T], tail included.
  const Fn eq_source = [&](double s) {
    const double a1 = eq.theta1.at(s);
    const double a2 = eq.theta2.at(s);
    return alpha_from(params, t, s) * (r_cost * a2 * a2 - a1 * a1);
  };

  const double p_tail = rk4_linear_backward(t_eps, T, step_count(T - t_eps, *in.opts),
                                            alpha(params.discount, T - t), eq_drift, eq_source);

  const int n_seg = std::max(64, step_count(in.eps, *in.opts));
  const double p_eq =
      rk4_linear_backward(t, t_eps, n_seg, p_tail, eq_drift, eq_source);

  double p_dev;
  if (in.mode == DeviationMode::proportional) {
    const Fn dev_drift = [&](double s) {
      const double other = (in.who == Player::one) ? eq.theta2.at(s) : eq.theta1.at(s);
      return 2.0 * (in.u_dev + other) + sig2;
    };
    const Fn dev_source = [&](double s) {
      double a1, a2;
      if (in.who == Player::one) {
        a1 = in.u_dev;
        a2 = eq.theta2.at(s);
      } else {
        a1 = eq.theta1.at(s);
        a2 = in.u_dev;
      }
      return alpha_from(params, t, s) * (r_cost * a2 * a2 - a1 * a1);
    };
    p_dev = rk4_linear_backward(t, t_eps, n_seg, p_tail, dev_drift, dev_source);
  } else {
    // Constant open-loop deviation: quadratic value V = a x^2 + b x + c.
    if (in.xi == 0.0)
      throw std::domain_error("spike_check: constant deviations need xi != 0");
    const double u = in.u_dev;
    const auto other_gain = [&](double s) {
      return (in.who == Player::one) ? eq.theta2.at(s) : eq.theta1.at(s);
    };
    const auto quad_cost = [&](double s) {
      const double g = other_gain(s);
      // coefficient of x^2 in the running cost
      return (in.who == Player::one) ? alpha_from(params, t, s) * r_cost * g * g
                                     : alpha_from(params, t, s) * (-g * g);
    };
    const auto const_cost = [&](double s) {
      return (in.who == Player::one) ? -alpha_from(params, t, s) * u * u
                                     : alpha_from(params, t, s) * r_cost * u * u;
    };
    const double h = in.eps / n_seg;
    double a = p_tail, b = 0.0, c = 0.0;
    double s = t_eps;
    const auto deriv = [&](double ss, double av, double bv, double& da, double& db,
                           double& dc) {
      const double g = other_gain(ss);
      da = -((2.0 * g + sig2) * av + quad_cost(ss));
      db = -(g * bv + 2.0 * av * u);
      dc = -(bv * u + const_cost(ss));
    };
    for (int i = 0; i < n_seg; ++i) {
      const double sm = s - 0.5 * h;
      const double s0 = s - h;
      double k1a, k1b, k1c, k2a, k2b, k2c, k3a, k3b, k3c, k4a, k4b, k4c;
      deriv(s, a, b, k1a, k1b, k1c);
      deriv(sm, a - 0.5 * h * k1a, b - 0.5 * h * k1b, k2a, k2b, k2c);
      deriv(sm, a - 0.5 * h * k2a, b - 0.5 * h * k2b, k3a, k3b, k3c);
      deriv(s0, a - h * k3a, b - h * k3b, k4a, k4b, k4c);
      a -= h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
      b -= h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
      c -= h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
      s = s0;
    }
    p_dev = a + (b * in.xi + c) / (in.xi * in.xi);
  }
  return SpikeValues{(p_dev - p_eq) / in.eps, p_dev, p_eq};
}

}  // namespace

SpikeResult spike_check(double t, double eps, double u_dev, Player who,
                        const ClosedLoopPair& equilibrium, const ModelParams& params,
                        SpikeObjective objective, DeviationMode mode, double xi,
                        const EvalOptions& opts) {
  params.validate();
  equilibrium.validate(params.horizon);
  if (!(eps > 0.0)) throw std::domain_error("spike_check: eps must be positive");
  if (!(t >= 0.0 && t + eps <= params.horizon + 1e-12))
    throw std::domain_error("spike_check: need 0 <= t < t+eps <= T");
  if (objective == SpikeObjective::single_player_value && who == Player::one)
    throw std::invalid_argument("spike_check: the single-player problem has no player 1");

  SpikeInputs in{t, eps, u_dev, xi, who, mode, &equilibrium, &params, &opts};
  const SpikeValues v = spike_quotient_j1(in);
  SpikeResult out{v.quotient, v.deviated, v.equilibrium};
  // J2 = -J1 pathwise, so player 2's own-objective quantities are the
  // exact negations of the common functional's.
  if (objective == SpikeObjective::single_player_value) {
    out.quotient = -out.quotient;
    out.deviated = -out.deviated;
    out.equilibrium = -out.equilibrium;
  }
  return out;
}

double spike_quotient_extrapolated(double t, double eps, double u_dev, Player who,
                                   const ClosedLoopPair& equilibrium, const ModelParams& params,
                                   SpikeObjective objective, DeviationMode mode, double xi,
                                   const EvalOptions& opts) {
  const double q1 =
      spike_check(t, eps, u_dev, who, equilibrium, params, objective, mode, xi, opts).quotient;
  const double q2 = spike_check(t, 0.5 * eps, u_dev, who, equilibrium, params, objective, mode,
                                xi, opts)
                        .quotient;
  return 2.0 * q2 - q1;
}

std::vector<double> spike_quotients(std::span<const SpikeCase> cases,
                                    const ClosedLoopPair& equilibrium, const ModelParams& params,
                                    SpikeObjective objective, DeviationMode mode, double xi,
                                    const EvalOptions& opts, bool parallel) {
  params.validate();
  equilibrium.validate(params.horizon);
  std::vector<double> out(cases.size());
  const long long n = static_cast<long long>(cases.size());
  (void)parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long long i = 0; i < n; ++i) {
    const SpikeCase& c = cases[i];
    out[i] = spike_quotient_extrapolated(c.t, c.eps, c.u_dev, c.who, equilibrium, params,
                                         objective, mode, xi, opts);
  }
  return out;
}

}  // namespace tilq
