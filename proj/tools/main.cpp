// tilq: solvers, verification, and figure reproduction for linear-quadratic
// stochastic control and zero-sum games under exponential or present-biased
// discounting.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
// 3 solver failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tilq/csv.hpp"
#include "tilq/equilibrium.hpp"
#include "tilq/figures.hpp"
#include "tilq/grid.hpp"
#include "tilq/verify.hpp"

namespace {

struct RunConfig {
  double horizon = 10.0;
  double sigma = 0.25;
  double rho = 0.15;
  double effort_ratio = 0.5;
  double lambda = 0.5;
  double gamma = 0.3;
  int intervals = 1000;
  int subgrid = 8;
  int paths = 20000;
  int steps = 500;
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  std::string figure = "all";

  tilq::ModelParams exponential_params() const {
    tilq::ModelParams p;
    p.horizon = horizon;
    p.sigma = sigma;
    p.effort_cost_ratio = effort_ratio;
    p.discount = tilq::DiscountSpec::exponential(rho);
    p.validate();
    return p;
  }
  tilq::ModelParams mixture_params() const {
    tilq::ModelParams p = exponential_params();
    p.discount = tilq::DiscountSpec::mixture(lambda, rho, gamma);
    p.validate();
    return p;
  }
};

void add_model_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--T", cfg.horizon, "horizon T");
  app->add_option("--sigma", cfg.sigma, "state volatility sigma");
  app->add_option("--rho", cfg.rho, "long-run discount rate rho");
  app->add_option("--R", cfg.effort_ratio, "effort cost ratio R in (0,1]");
  app->add_option("--lambda", cfg.lambda, "mixture weight lambda in (0,1)");
  app->add_option("--gamma", cfg.gamma, "short-run discount rate gamma > rho");
  app->add_option("--N", cfg.intervals, "partition intervals");
  app->add_option("--subgrid", cfg.subgrid, "quadrature panels per subinterval");
  app->add_option("--paths", cfg.paths, "Monte Carlo paths");
  app->add_option("--steps", cfg.steps, "Monte Carlo time steps");
  app->add_option("--seed", cfg.seed, "random seed");
  app->add_option("--out", cfg.out_dir, "output directory");
}

void write_strategy_csv(const std::string& dir, const std::vector<double>& s,
                        const std::vector<double>& th1, const std::vector<double>& th2) {
  std::filesystem::create_directories(dir);
  tilq::CsvTable t;
  t.header = {"s", "theta1", "theta2"};
  t.columns = {s, th1, th2};
  tilq::write_csv_file(dir + "/strategy.csv", t);
}

void write_kernel_csv(const std::string& dir, const tilq::TriangularKernel& kernel) {
  std::filesystem::create_directories(dir);
  tilq::CsvTable t;
  t.header = {"t", "s", "P"};
  t.columns.assign(3, {});
  for (std::size_t i = 0; i < kernel.grid.size(); ++i) {
    for (std::size_t j = i; j < kernel.grid.size(); ++j) {
      t.columns[0].push_back(kernel.grid[i]);
      t.columns[1].push_back(kernel.grid[j]);
      t.columns[2].push_back(kernel.rows[i][j - i]);
    }
  }
  tilq::write_csv_file(dir + "/kernel.csv", t);
}

int cmd_solve(const RunConfig& cfg, const std::string& which) {
  using namespace tilq;
  if (which == "single-constant" || which == "game-constant") {
    const ModelParams p = cfg.exponential_params();
    const auto s = linspace(0.0, p.horizon, cfg.intervals + 1);
    std::vector<double> th1(s.size(), 0.0), th2(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (which == "single-constant") {
        th2[i] = single_constant_gain(p, s[i]);
      } else {
        const auto g = game_constant_gains(p, s[i]);
        th1[i] = g.first;
        th2[i] = g.second;
      }
    }
    write_strategy_csv(cfg.out_dir, s, th1, th2);
    std::cout << "wrote " << cfg.out_dir << "/strategy.csv (" << s.size() << " rows)\n";
    return 0;
  }

  const ModelParams p = cfg.mixture_params();
  const Partition pi = Partition::uniform(p.horizon, cfg.intervals);
  if (which == "single-equilibrium") {
    const auto sol = single_partition_solve(p, pi, cfg.subgrid);
    write_strategy_csv(cfg.out_dir, sol.theta2.grid,
                       std::vector<double>(sol.theta2.grid.size(), 0.0), sol.theta2.values);
    write_kernel_csv(cfg.out_dir, sol.kernel);
  } else {
    const auto sol = game_partition_solve(p, pi, cfg.subgrid);
    write_strategy_csv(cfg.out_dir, sol.theta1.grid, sol.theta1.values, sol.theta2.values);
    write_kernel_csv(cfg.out_dir, sol.kernel);
    if (std::abs(p.effort_cost_ratio - 1.0) <= 1e-12) {
      double sup = 0.0;
      for (int i = 0; i <= 311; ++i) {
        const double t = p.horizon * i / 311;
        for (int j = 0; j <= 48; ++j) {
          const double s = t + (p.horizon - t) * j / 48.0;
          sup = std::max(sup, std::abs(sol.kernel.value(t, s) - symmetric_kernel(p, t, s)));
        }
      }
      std::printf("symmetric closed-form sup-error: %.6e\n", sup);
    }
  }
  std::cout << "wrote " << cfg.out_dir << "/strategy.csv and " << cfg.out_dir << "/kernel.csv\n";
  return 0;
}

int cmd_figures(const RunConfig& cfg, bool lambda_set, bool gamma_set) {
  tilq::FigureOptions fo;
  fo.params = cfg.mixture_params();
  fo.subgrid_factor = cfg.subgrid;
  fo.partition_intervals = std::min(cfg.intervals, 2000);
  fo.fig2_caption_defaults = !(lambda_set || gamma_set);

  std::vector<int> ids;
  if (cfg.figure == "all") {
    ids = {1, 2, 3, 4, 5, 6, 7, 8};
  } else {
    try {
      const int id = std::stoi(cfg.figure);
      if (id < 1 || id > 8) throw std::invalid_argument("range");
      ids = {id};
    } catch (const std::exception&) {
      throw std::invalid_argument("figure id must be 1..8 or 'all'");
    }
  }
  for (int id : ids) {
    tilq::emit_figure(id, fo, cfg.out_dir);
    std::cout << "wrote " << cfg.out_dir << "/fig" << id << ".csv and fig" << id << ".svg\n";
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  tilq::VerifyOptions o;
  o.seed = cfg.seed;
  o.mc_paths = cfg.paths;
  o.mc_steps = cfg.steps;
  const int n = cfg.intervals;
  o.cross_intervals = n;
  o.spike_intervals = n;
  o.sym_intervals = std::max(100, n / 2);
  o.degeneracy_intervals = std::max(100, n / 2);
  o.subgrid_factor = cfg.subgrid;
  // validate the model flags even though verify runs on the baselines
  (void)cfg.mixture_params();

  const auto results = tilq::run_verification(o);
  std::cout << tilq::render_report(o, results);
  return tilq::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear-quadratic stochastic control and zero-sum games under "
               "exponential and present-biased discounting"};
  app.fallthrough();
  RunConfig cfg;
  add_model_options(&app, cfg);
  app.set_config("--config", "", "flat key=value configuration file");
  app.require_subcommand(0, 1);

  auto* solve = app.add_subcommand("solve", "solve a control problem or game");
  solve->fallthrough();
  solve->require_subcommand(1);
  const char* kinds[] = {"single-constant", "single-equilibrium", "game-constant",
                         "game-equilibrium"};
  for (const char* k : kinds) solve->add_subcommand(k)->fallthrough();

  auto* figures = app.add_subcommand("figures", "emit figN.csv / figN.svg");
  figures->fallthrough();
  figures->add_option("--fig", cfg.figure, "figure id 1..8 or 'all'");

  auto* verify = app.add_subcommand("verify", "run the verification suites");
  verify->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) {
      for (const char* k : kinds)
        if (solve->get_subcommand(k)->parsed()) return cmd_solve(cfg, k);
    }
    if (figures->parsed())
      return cmd_figures(cfg, app.count("--lambda") > 0, app.count("--gamma") > 0);
    if (verify->parsed()) return cmd_verify(cfg);
    std::cout << app.help();
    return 0;
  } catch (const tilq::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
