#include "tilq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "tilq/equilibrium.hpp"
#include "tilq/evaluate.hpp"
#include "tilq/figures.hpp"
#include "tilq/grid.hpp"
#include "tilq/rng.hpp"
#include "tilq/simulate.hpp"

namespace tilq {

ModelParams baseline_exponential() {
  ModelParams p;
  p.horizon = 10.0;
  p.sigma = 0.25;
  p.effort_cost_ratio = 0.5;
  p.discount = DiscountSpec::exponential(0.15);
  return p;
}

ModelParams baseline_mixture() {
  ModelParams p = baseline_exponential();
  p.discount = DiscountSpec::mixture(0.5, 0.15, 0.3);
  return p;
}

namespace {

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

// Direct backward RK4 of y' = f(s, y) from y(T) = terminal on a uniform
// grid; the independent re-derivation the closed forms are checked against.
std::vector<double> rk4_backward(double horizon, double terminal, int n_steps,
                                 const std::function<double(double, double)>& f) {
  std::vector<double> y(n_steps + 1);
  y[n_steps] = terminal;
  const double h = horizon / n_steps;
  for (int i = n_steps; i > 0; --i) {
    const double s = horizon * i / n_steps;
    const double k1 = f(s, y[i]);
    const double k2 = f(s - 0.5 * h, y[i] - 0.5 * h * k1);
    const double k3 = f(s - 0.5 * h, y[i] - 0.5 * h * k2);
    const double k4 = f(s - h, y[i] - h * k3);
    y[i - 1] = y[i] - h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

struct KernelSlacks {
  double nonneg = 0.0;     // min P
  double envelope = 0.0;   // min (Xi(s) - P)
  double dominance = 0.0;  // min (P(s,s) - P(t,s))
};

KernelSlacks kernel_slacks(const TriangularKernel& kernel, double sigma) {
  const double sig2 = sigma * sigma;
  const double T = kernel.grid.back();
  KernelSlacks sl;
  sl.nonneg = sl.envelope = sl.dominance = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(kernel.grid.size()) - 1;
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      const double p = kernel.rows[i][j - i];
      sl.nonneg = std::min(sl.nonneg, p);
      sl.envelope = std::min(sl.envelope, std::exp(sig2 * (T - kernel.grid[j])) - p);
      sl.dominance = std::min(sl.dominance, kernel.rows[j][0] - p);
    }
  }
  return sl;
}

}  // namespace

CheckResult check_closed_forms_vs_rk4(const VerifyOptions& o) {
  const ModelParams p = o.baseline;
  const double R = p.effort_cost_ratio;
  const double sig2 = p.sigma * p.sigma;
  const double rho = p.discount.rho;
  const int n = o.oracle_steps;

  const auto p_single = rk4_backward(
      p.horizon, 1.0, n, [&](double, double y) { return (rho - sig2) * y + y * y / R; });
  const auto p_game = rk4_backward(p.horizon, 1.0, n, [&](double, double y) {
    return (rho - sig2) * y + (1.0 - R) / R * y * y;
  });

  double sup_single = 0.0, sup_game = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = p.horizon * i / n;
    sup_single = std::max(sup_single, std::abs(single_constant_gain(p, s) - (-p_single[i] / R)));
    const auto [g1, g2] = game_constant_gains(p, s);
    sup_game = std::max(sup_game, std::abs(g1 - p_game[i]));
    sup_game = std::max(sup_game, std::abs(g2 - (-p_game[i] / R)));
  }
  const double term_err =
      std::max({std::abs(single_constant_gain(p, p.horizon) + 1.0 / R),
                std::abs(game_constant_gains(p, p.horizon).first - 1.0),
                std::abs(game_constant_gains(p, p.horizon).second + 1.0 / R)});

  const bool pass = sup_single <= 1e-8 && sup_game <= 1e-8 && term_err <= 1e-12;
  return {"closed forms vs RK4 oracle", pass,
          fmt("sup_single=%.3e sup_game=%.3e terminal=%.3e", sup_single, sup_game, term_err)};
}

CheckResult check_symmetric_ere(const VerifyOptions& o) {
  ModelParams p = baseline_mixture();
  p.effort_cost_ratio = 1.0;

  const auto sup_error = [&](int n_intervals) {
    const auto sol =
        game_partition_solve(p, Partition::uniform(p.horizon, n_intervals), o.subgrid_factor);
    double sup = 0.0;
    const int nt = 311;  // off the partition nodes for generic meshes
    for (int i = 0; i <= nt; ++i) {
      const double t = p.horizon * i / nt;
      for (int j = 0; j <= 48; ++j) {
        const double s = t + (p.horizon - t) * j / 48.0;
        sup = std::max(sup, std::abs(sol.kernel.value(t, s) - symmetric_kernel(p, t, s)));
      }
    }
    return sup;
  };

  const double e1 = sup_error(o.sym_intervals);
  const double e2 = sup_error(2 * o.sym_intervals);
  const double ratio = e2 / e1;
  const bool pass = e1 <= 1e-2 && ratio >= 0.35 && ratio <= 0.65;
  return {"symmetric ERE vs closed form", pass,
          fmt("sup@N=%.3e sup@2N=%.3e ratio=%.3f", e1, e2, ratio)};
}

CheckResult check_cross_oracle(const VerifyOptions& o) {
  const ModelParams p = baseline_mixture();
  const auto sol =
      game_partition_solve(p, Partition::uniform(p.horizon, o.cross_intervals), o.subgrid_factor);

  const auto gamma = vdie_solve(p, linspace(0.0, p.horizon, o.vdie_nodes + 1));
  double sup_diag = 0.0;
  for (std::size_t k = 0; k < sol.kernel.grid.size(); ++k)
    sup_diag = std::max(
        sup_diag, std::abs(gamma.at(sol.kernel.grid[k]) - sol.kernel.rows[k][0]));

  const auto gamma_fine = vdie_solve(p, linspace(0.0, p.horizon, o.reconstruct_nodes + 1));
  const int stride = std::max(1, o.reconstruct_nodes / 2000);
  const auto rebuilt = reconstruct_kernel(gamma_fine, p, stride);
  double sup_identity = 0.0;
  for (std::size_t i = 0; i < rebuilt.grid.size(); ++i) {
    const std::size_t m = i * static_cast<std::size_t>(stride);
    sup_identity = std::max(sup_identity, std::abs(rebuilt.rows[i][0] - gamma_fine.values[m]));
  }

  const bool pass = sup_diag <= 2e-3 && sup_identity <= 1e-6;
  return {"cross-oracle diagonals", pass,
          fmt("|Gamma - P_diag|=%.3e reconstruct_identity=%.3e", sup_diag, sup_identity)};
}

CheckResult check_apriori_bounds(const VerifyOptions& o) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < o.sweep_count; ++i) {
    const std::uint64_t stream = 1000 + static_cast<std::uint64_t>(i);
    const auto u = [&](int dim) { return uniform_at(o.seed, stream, dim); };
    ModelParams p;
    p.horizon = 2.0 + 13.0 * u(0);
    p.sigma = 0.05 + 0.55 * u(1);
    p.effort_cost_ratio = 0.1 + 0.9 * u(2);
    const double rho = 0.02 + 0.38 * u(3);
    const double gamma = rho + 0.05 + 0.35 * u(4);
    const double lambda = 0.05 + 0.9 * u(5);
    p.discount = DiscountSpec::mixture(lambda, rho, gamma);

    const Partition pi = Partition::uniform(p.horizon, o.sweep_intervals);
    const auto game = game_partition_solve(p, pi, 4);
    const auto single = single_partition_solve(p, pi, 4);
    for (const auto* kernel : {&game.kernel, &single.kernel}) {
      const auto sl = kernel_slacks(*kernel, p.sigma);
      worst = std::min({worst, sl.nonneg, sl.envelope, sl.dominance});
    }
  }
  const bool pass = worst >= -1e-10;
  return {"a-priori kernel bounds (random sweep)", pass, fmt("worst_slack=%.3e", worst)};
}

namespace {

struct SpikeSummary {
  double worst_p1 = -std::numeric_limits<double>::infinity();  // max quotient, player 1
  double worst_p2 = std::numeric_limits<double>::infinity();   // min quotient, player 2
};

SpikeSummary spike_grid_quotients(const ClosedLoopPair& pair, const ModelParams& p, int grid_n,
                                  SpikeObjective objective) {
  SpikeSummary out;
  const EvalOptions opts{1600};
  const auto ts = linspace(0.5, 8.5, grid_n);
  const auto dev1 = linspace(-0.5, 1.5, grid_n);
  const auto dev2 = linspace(-3.0, 1.0, grid_n);
  std::vector<SpikeCase> cases;
  for (double t : ts) {
    for (int j = 0; j < grid_n; ++j) {
      if (objective == SpikeObjective::game_value)
        cases.push_back({t, 0.1, dev1[j], Player::one});
      cases.push_back({t, 0.1, dev2[j], Player::two});
    }
  }
  const auto q = spike_quotients(cases, pair, p, objective, DeviationMode::proportional, 1.0,
                                 opts);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (objective == SpikeObjective::game_value && cases[i].who == Player::one)
      out.worst_p1 = std::max(out.worst_p1, q[i]);
    else if (objective == SpikeObjective::game_value)
      out.worst_p2 = std::min(out.worst_p2, q[i]);
    else
      out.worst_p1 = std::max(out.worst_p1, q[i]);  // own-objective quotient, limsup <= 0
  }
  return out;
}

}  // namespace

CheckResult check_spike_game(const VerifyOptions& o) {
  const ModelParams p = baseline_mixture();
  const auto sol =
      game_partition_solve(p, Partition::uniform(p.horizon, o.spike_intervals), o.subgrid_factor);
  const ClosedLoopPair pair{sol.theta1, sol.theta2};
  const auto s = spike_grid_quotients(pair, p, o.spike_grid, SpikeObjective::game_value);
  const bool pass = s.worst_p1 <= 1e-3 && s.worst_p2 >= -1e-3;
  return {"spike variation, game equilibrium", pass,
          fmt("max_p1_quotient=%.3e min_p2_quotient=%.3e", s.worst_p1, s.worst_p2)};
}

CheckResult check_spike_single(const VerifyOptions& o) {
  const ModelParams p = baseline_mixture();
  const auto sol = single_partition_solve(p, Partition::uniform(p.horizon, o.spike_intervals),
                                          o.subgrid_factor);
  const auto pair = ClosedLoopPair::single_player(sol.theta2);
  const auto s = spike_grid_quotients(pair, p, o.spike_grid, SpikeObjective::single_player_value);
  const bool pass = s.worst_p1 <= 1e-3;
  return {"spike variation, single-player equilibrium", pass,
          fmt("max_quotient=%.3e", s.worst_p1)};
}

CheckResult check_degeneracy_collapse(const VerifyOptions& o) {
  ModelParams mix = baseline_exponential();
  mix.discount = DiscountSpec::mixture(1.0 - 1e-12, 0.15, 0.3);
  const ModelParams expo = baseline_exponential();
  const Partition pi = Partition::uniform(mix.horizon, o.degeneracy_intervals);
  // the 1e-6 target needs the finer quadrature subgrid; the scheme error
  // vanishes for exponential discounting and only trapezoid error remains
  const int subgrid = 2 * o.subgrid_factor;

  const auto single = single_partition_solve(mix, pi, subgrid);
  double sup_single = 0.0;
  for (std::size_t k = 0; k < pi.points.size(); ++k)
    sup_single = std::max(sup_single, std::abs(single.theta2.values[k] -
                                               single_constant_gain(expo, pi.points[k])));

  const auto game = game_partition_solve(mix, pi, subgrid);
  double sup_game = 0.0;
  for (std::size_t k = 0; k < pi.points.size(); ++k) {
    const auto [g1, g2] = game_constant_gains(expo, pi.points[k]);
    sup_game = std::max(sup_game, std::abs(game.theta1.values[k] - g1));
    sup_game = std::max(sup_game, std::abs(game.theta2.values[k] - g2));
  }

  const bool pass = sup_single <= 1e-6 && sup_game <= 1e-6;
  return {"mixture degeneracy collapse", pass,
          fmt("sup_single=%.3e sup_game=%.3e", sup_single, sup_game)};
}

CheckResult check_figure_orderings(const VerifyOptions& o) {
  FigureOptions fo;
  fo.params = baseline_mixture();
  fo.subgrid_factor = o.subgrid_factor;
  const double tol = 1e-9;

  const auto fig3 = build_figure(3, fo);
  double worst3 = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < fig3.n_rows(); ++r) {
    const double eq = fig3.columns[1][r], lo = fig3.columns[2][r], hi = fig3.columns[3][r];
    worst3 = std::min({worst3, eq - lo, hi - eq});
  }

  const auto fig8 = build_figure(8, fo);
  double worst8 = std::numeric_limits<double>::infinity();
  double tail8 = std::numeric_limits<double>::infinity();  // reported, not asserted
  for (std::size_t r = 0; r < fig8.n_rows(); ++r) {
    const double eq = fig8.columns[1][r], a = fig8.columns[2][r], b = fig8.columns[3][r];
    const double slack = std::min(eq - std::min(a, b), std::max(a, b) - eq);
    if (fig8.columns[0][r] <= 8.5)
      worst8 = std::min(worst8, slack);  // ordering asserted on s <= 8.5 only
    else
      tail8 = std::min(tail8, slack);
  }

  const auto fig5 = build_figure(5, fo);
  double worst5 = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < fig5.n_rows(); ++r)
    worst5 = std::min(worst5, std::abs(fig5.columns[1][r]) - std::abs(fig5.columns[2][r]));

  const auto fig7 = build_figure(7, fo);
  double worst7 = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < fig7.n_rows(); ++r)
    worst7 = std::min(worst7, std::abs(fig7.columns[1][r]) - std::abs(fig7.columns[2][r]));

  const bool pass = worst3 >= -tol && worst8 >= -tol && worst5 >= -tol && worst7 >= -tol;
  return {"figure orderings (sandwich + intensification)", pass,
          fmt("fig3=%.3e fig8=%.3e fig8_tail=%.3e", worst3, worst8, tail8) +
              fmt(" fig5=%.3e fig7=%.3e", worst5, worst7)};
}

CheckResult check_monte_carlo(const VerifyOptions& o) {
  const ModelParams p = baseline_mixture();
  const auto sol =
      game_partition_solve(p, Partition::uniform(p.horizon, 1000), o.subgrid_factor);
  const ClosedLoopPair pair{sol.theta1, sol.theta2};

  SimConfig cfg;
  cfg.n_paths = o.mc_paths;
  cfg.n_steps = o.mc_steps;
  cfg.seed = o.seed;
  cfg.xi = 1.0;
  const auto ensemble = simulate_closed_loop(pair, p, cfg);
  const auto mc = monte_carlo_value(ensemble, p, 0.0);
  const double p_lyap = closed_loop_value(0.0, pair, p).p;
  const double gap = std::abs(mc.estimate - p_lyap);
  const double residual = pathwise_zero_sum_max_residual(ensemble, p, 0.0);

  const bool pass = gap <= 3.0 * mc.std_error && residual == 0.0;
  return {"Monte Carlo vs Lyapunov value", pass,
          fmt("mc=%.6e lyap=%.6e", mc.estimate, p_lyap) +
              fmt(" gap/se=%.3f residual=%.1e", gap / mc.std_error, residual)};
}

std::vector<CheckResult> run_verification(const VerifyOptions& o) {
  std::vector<CheckResult> results;
  results.push_back(check_closed_forms_vs_rk4(o));
  results.push_back(check_symmetric_ere(o));
  results.push_back(check_cross_oracle(o));
  results.push_back(check_apriori_bounds(o));
  results.push_back(check_spike_game(o));
  results.push_back(check_spike_single(o));
  results.push_back(check_degeneracy_collapse(o));
  results.push_back(check_figure_orderings(o));
  results.push_back(check_monte_carlo(o));
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

std::string render_report(const VerifyOptions& o, const std::vector<CheckResult>& results) {
  std::ostringstream out;
  out << "tilq verification report\n";
  out << "seed=" << o.seed << " N_sym=" << o.sym_intervals << " N_cross=" << o.cross_intervals
      << " N_spike=" << o.spike_intervals << " paths=" << o.mc_paths << " steps=" << o.mc_steps
      << "\n\n";
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  for (const auto& r : results) {
    out << "  " << r.name;
    out.width(0);
    for (std::size_t i = r.name.size(); i < width + 2; ++i) out << ' ';
    out << (r.pass ? "PASS" : "FAIL") << "  " << r.detail << '\n';
  }
  out << "\noverall: " << (all_passed(results) ? "PASS" : "FAIL") << '\n';
  return out.str();
}

}  // namespace tilq
