#include "tilq/simulate.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "tilq/csv.hpp"
#include "tilq/rng.hpp"

namespace tilq {

double PathEnsemble::control(int path, int step, Player who) const {
  const double g = (who == Player::one) ? gain1_nodes[step] : gain2_nodes[step];
  return g * state(path, step);
}

PathEnsemble simulate_closed_loop(const ClosedLoopPair& pair, const ModelParams& params,
                                  const SimConfig& cfg, ExecutionPolicy policy) {
  params.validate();
  pair.validate(params.horizon);
  if (cfg.n_paths < 1 || cfg.n_steps < 1)
    throw std::invalid_argument("simulate: n_paths and n_steps must be >= 1");

  const int n_steps = cfg.n_steps;
  const double dt = params.horizon / n_steps;
  const double vol = params.sigma * std::sqrt(dt);
  const double sig2 = params.sigma * params.sigma;

  PathEnsemble out;
  out.n_paths = cfg.n_paths;
  out.n_steps = n_steps;
  out.xi = cfg.xi;
  out.times.resize(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) out.times[k] = dt * k;
  out.times.back() = params.horizon;

  out.gain1_nodes.resize(n_steps + 1);
  out.gain2_nodes.resize(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) {
    out.gain1_nodes[k] = pair.theta1.at(out.times[k]);
    out.gain2_nodes[k] = pair.theta2.at(out.times[k]);
  }

  // Per-step log-drift with the total feedback frozen at the midpoint;
  // shared across paths so parallel and serial runs do the same arithmetic.
  std::vector<double> log_drift(n_steps);
  for (int k = 0; k < n_steps; ++k) {
    const double mid = 0.5 * (out.times[k] + out.times[k + 1]);
    log_drift[k] = (pair.theta1.at(mid) + pair.theta2.at(mid) - 0.5 * sig2) * dt;
  }

  out.states.resize(static_cast<std::size_t>(cfg.n_paths) * (n_steps + 1));
  const bool run_parallel = (policy == ExecutionPolicy::parallel);
  (void)run_parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (run_parallel)
#endif
  for (int p = 0; p < cfg.n_paths; ++p) {
    double* x = &out.states[static_cast<std::size_t>(p) * (n_steps + 1)];
    x[0] = cfg.xi;
    for (int k = 0; k < n_steps; ++k) {
      const double z = normal_at(cfg.seed, static_cast<std::uint64_t>(p),
                                 static_cast<std::uint64_t>(k));
      x[k + 1] = x[k] * std::exp(log_drift[k] + vol * z);
    }
  }
  return out;
}

namespace {

struct PathFunctionals {
  double j1;
  double j2;  // mirrored arithmetic; exact negation of j1
};

PathFunctionals path_values(const PathEnsemble& e, const ModelParams& params, double t, int p) {
  const double r_cost = params.effort_cost_ratio;
  const int n = e.n_steps;
  double run1 = 0.0, run2 = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double w = 0.5 * ((k < n ? e.times[k + 1] : e.times[k]) -
                            (k > 0 ? e.times[k - 1] : e.times[k]));
    const double x = e.state(p, k);
    const double u1 = e.gain1_nodes[k] * x;
    const double u2 = e.gain2_nodes[k] * x;
    const double a = u1 * u1;
    const double b = r_cost * (u2 * u2);
    const double disc = alpha(params.discount, e.times[k] - t);
    run1 += w * (disc * (b - a));
    run2 += w * (disc * (a - b));
  }
  const double xT = e.state(p, n);
  const double terminal = alpha(params.discount, e.times[n] - t) * (xT * xT);
  return {run1 + terminal, run2 - terminal};
}

void require_anchor(const PathEnsemble& e, double t) {
  if (std::abs(t - e.times.front()) > 1e-12)
    throw std::domain_error("monte carlo value: t must match the ensemble's initial time");
}

}  // namespace

McValue monte_carlo_value(const PathEnsemble& ensemble, const ModelParams& params, double t) {
  params.validate();
  require_anchor(ensemble, t);
  const int n = ensemble.n_paths;
  std::vector<double> j(n);
  for (int p = 0; p < n; ++p) j[p] = path_values(ensemble, params, t, p).j1;
  double mean = 0.0;
  for (double v : j) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : j) ss += (v - mean) * (v - mean);
  const double se = (n > 1) ? std::sqrt(ss / (static_cast<double>(n) - 1.0) / n) : 0.0;
  return {mean, se};
}

double pathwise_zero_sum_max_residual(const PathEnsemble& ensemble, const ModelParams& params,
                                      double t) {
  params.validate();
  require_anchor(ensemble, t);
  double worst = 0.0;
  for (int p = 0; p < ensemble.n_paths; ++p) {
    const auto v = path_values(ensemble, params, t, p);
    worst = std::max(worst, std::abs(v.j1 + v.j2));
  }
  return worst;
}

void write_ensemble_csv(const PathEnsemble& ensemble, std::ostream& out) {
  out << "path,step,time,state,u1,u2\n";
  for (int p = 0; p < ensemble.n_paths; ++p) {
    for (int k = 0; k <= ensemble.n_steps; ++k) {
      out << p << ',' << k << ',' << format_double(ensemble.times[k]) << ','
          << format_double(ensemble.state(p, k)) << ','
          << format_double(ensemble.control(p, k, Player::one)) << ','
          << format_double(ensemble.control(p, k, Player::two)) << '\n';
    }
  }
}

}  // namespace tilq
