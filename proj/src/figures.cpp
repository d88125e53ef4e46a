#include "tilq/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "tilq/equilibrium.hpp"
#include "tilq/grid.hpp"
#include "tilq/svg.hpp"

namespace tilq {

namespace {

std::string tag(const char* name, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s=%.4g", name, v);
  return buf;
}

std::vector<double> curve_single_constant(const ModelParams& p, const std::vector<double>& s) {
  std::vector<double> y(s.size(), std::nan(""));
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] <= p.horizon + 1e-12) y[i] = single_constant_gain(p, std::min(s[i], p.horizon));
  return y;
}

std::vector<double> curve_game_constant(const ModelParams& p, const std::vector<double>& s) {
  std::vector<double> y(s.size(), std::nan(""));
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] <= p.horizon + 1e-12) y[i] = game_constant_gains(p, std::min(s[i], p.horizon)).second;
  return y;
}

std::vector<double> sample(const StrategyCurve& c, const std::vector<double>& s, double horizon) {
  std::vector<double> y(s.size(), std::nan(""));
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] <= horizon + 1e-12) y[i] = c.at(std::min(s[i], horizon));
  return y;
}

StrategyCurve equilibrium_theta2(const ModelParams& p, const FigureOptions& o, bool game) {
  const Partition pi = Partition::uniform(p.horizon, o.partition_intervals);
  if (game) return game_partition_solve(p, pi, o.subgrid_factor).theta2;
  return single_partition_solve(p, pi, o.subgrid_factor).theta2;
}

ModelParams with_exponential(const ModelParams& base, double rate) {
  ModelParams p = base;
  p.discount = DiscountSpec::exponential(rate);
  return p;
}

ModelParams fig_mixture_params(const FigureOptions& o, int id) {
  ModelParams p = o.params;
  if (p.discount.kind != DiscountKind::mixture) {
    // figure baselines: lambda=0.5, gamma=0.3 except figure 2's caption
    p.discount = DiscountSpec::mixture(0.5, p.discount.rho, 0.3);
  }
  if (id == 2 && o.fig2_caption_defaults)
    p.discount = DiscountSpec::mixture(0.3, p.discount.rho, 0.3);
  return p;
}

struct FigureData {
  CsvTable table;
  std::vector<SvgPanel> panels;
  std::string title;
};

// One curve per parameter variation, NaN-padded where a shorter horizon
// ends. Used by figures 1 (single player) and 4 (game).
FigureData constant_sweep_figure(const FigureOptions& o, bool game) {
  const ModelParams base = with_exponential(o.params, o.params.discount.rho);
  const double t_max = 1.5 * base.horizon;
  const std::vector<double> s = linspace(0.0, t_max, o.samples);

  FigureData fig;
  fig.title = game ? "Saddle feedback of player 2, constant discounting"
                   : "Optimal feedback of player 2, constant discounting";
  fig.table.header = {"s"};
  fig.table.columns = {s};

  const auto add_panel = [&](const std::string& name, const std::vector<ModelParams>& variants,
                             const std::vector<std::string>& labels) {
    SvgPanel panel;
    panel.title = name;
    panel.y_label = "theta2";
    for (std::size_t i = 0; i < variants.size(); ++i) {
      const auto y = game ? curve_game_constant(variants[i], s)
                          : curve_single_constant(variants[i], s);
      fig.table.header.push_back(labels[i]);
      fig.table.columns.push_back(y);
      panel.series.push_back(SvgSeries{labels[i], s, y});
    }
    fig.panels.push_back(std::move(panel));
  };

  {
    std::vector<ModelParams> v;
    std::vector<std::string> lab;
    for (double f : {0.5, 1.0, 2.0}) {
      ModelParams p = base;
      p.effort_cost_ratio = std::min(1.0, base.effort_cost_ratio * f);
      v.push_back(p);
      lab.push_back(tag("R", p.effort_cost_ratio));
    }
    add_panel("effort cost R", v, lab);
  }
  {
    std::vector<ModelParams> v;
    std::vector<std::string> lab;
    for (double f : {0.5, 1.0, 2.0}) {
      ModelParams p = with_exponential(base, base.discount.rho * f);
      v.push_back(p);
      lab.push_back(tag("rho", p.discount.rho));
    }
    add_panel("discount rate rho", v, lab);
  }
  {
    std::vector<ModelParams> v;
    std::vector<std::string> lab;
    for (double f : {0.4, 1.0, 1.6}) {
      ModelParams p = base;
      p.sigma = base.sigma * f;
      v.push_back(p);
      lab.push_back(tag("sigma", p.sigma));
    }
    add_panel("volatility sigma", v, lab);
  }
  {
    std::vector<ModelParams> v;
    std::vector<std::string> lab;
    for (double f : {0.5, 1.0, 1.5}) {
      ModelParams p = base;
      p.horizon = base.horizon * f;
      v.push_back(p);
      lab.push_back(tag("T", p.horizon));
    }
    add_panel("horizon T", v, lab);
  }
  return fig;
}

// Equilibrium strategy sweeps over the mixture parameters (figures 2, 6).
FigureData equilibrium_sweep_figure(const FigureOptions& o, int id, bool game) {
  const ModelParams base = fig_mixture_params(o, id);
  const std::vector<double> s = linspace(0.0, base.horizon, o.samples);

  FigureData fig;
  fig.title = game ? "Equilibrium saddle feedback of player 2, present-biased discounting"
                   : "Equilibrium feedback of player 2, present-biased discounting";
  fig.table.header = {"s"};
  fig.table.columns = {s};

  SvgPanel lam_panel{"mixture weight lambda", "s", "theta2", {}};
  for (double lam : {0.1, base.discount.lambda, 0.9}) {
    ModelParams p = base;
    p.discount = DiscountSpec::mixture(lam, base.discount.rho, base.discount.gamma);
    const auto y = sample(equilibrium_theta2(p, o, game), s, p.horizon);
    fig.table.header.push_back(tag("lambda", lam));
    fig.table.columns.push_back(y);
    lam_panel.series.push_back(SvgSeries{tag("lambda", lam), s, y});
  }
  fig.panels.push_back(std::move(lam_panel));

  SvgPanel gam_panel{"short-run rate gamma", "s", "theta2", {}};
  for (double f : {1.0, 1.5, 2.5}) {
    const double gam = base.discount.gamma * f;
    ModelParams p = base;
    p.discount = DiscountSpec::mixture(base.discount.lambda, base.discount.rho, gam);
    const auto y = sample(equilibrium_theta2(p, o, game), s, p.horizon);
    fig.table.header.push_back(tag("gamma", gam));
    fig.table.columns.push_back(y);
    gam_panel.series.push_back(SvgSeries{tag("gamma", gam), s, y});
  }
  fig.panels.push_back(std::move(gam_panel));
  return fig;
}

// Sandwich overlays (figures 3 and 8): the equilibrium strategy bracketed
// by the constant-rate strategies at the long-run and short-horizon rates.
FigureData sandwich_figure(const FigureOptions& o, int id) {
  const bool game = (id == 8);
  const ModelParams mix = fig_mixture_params(o, id);
  const double rate_lo = mix.discount.rho;
  const double rate_hi = short_rate(mix.discount);
  const std::vector<double> s = linspace(0.0, mix.horizon, o.samples);

  const auto eq = sample(equilibrium_theta2(mix, o, game), s, mix.horizon);
  const auto lo = game ? curve_game_constant(with_exponential(mix, rate_lo), s)
                       : curve_single_constant(with_exponential(mix, rate_lo), s);
  const auto hi = game ? curve_game_constant(with_exponential(mix, rate_hi), s)
                       : curve_single_constant(with_exponential(mix, rate_hi), s);

  FigureData fig;
  fig.title = game ? "Equilibrium saddle feedback vs constant-rate saddle strategies"
                   : "Equilibrium feedback vs constant-rate optimal strategies";
  fig.table.header = {"s", "theta2_equilibrium", tag("theta2_rate", rate_lo),
                      tag("theta2_rate", rate_hi)};
  fig.table.columns = {s, eq, lo, hi};
  SvgPanel panel{fig.title, "s", "theta2", {}};
  panel.series = {SvgSeries{"equilibrium", s, eq}, SvgSeries{tag("rate", rate_lo), s, lo},
                  SvgSeries{tag("rate", rate_hi), s, hi}};
  fig.panels.push_back(std::move(panel));
  return fig;
}

// Intensification overlays (figures 5 and 7): game strategy against the
// single-player strategy, constant discounting for 5, equilibrium for 7.
FigureData intensification_figure(const FigureOptions& o, int id) {
  FigureData fig;
  if (id == 5) {
    const ModelParams base = with_exponential(o.params, o.params.discount.rho);
    const std::vector<double> s = linspace(0.0, base.horizon, o.samples);
    const auto gm = curve_game_constant(base, s);
    const auto sp = curve_single_constant(base, s);
    fig.title = "Game vs single-player feedback, constant discounting";
    fig.table.header = {"s", "theta2_game", "theta2_single"};
    fig.table.columns = {s, gm, sp};
    SvgPanel panel{fig.title, "s", "theta2", {}};
    panel.series = {SvgSeries{"game", s, gm}, SvgSeries{"single", s, sp}};
    fig.panels.push_back(std::move(panel));
  } else {
    const ModelParams mix = fig_mixture_params(o, id);
    const std::vector<double> s = linspace(0.0, mix.horizon, o.samples);
    const auto gm = sample(equilibrium_theta2(mix, o, true), s, mix.horizon);
    const auto sp = sample(equilibrium_theta2(mix, o, false), s, mix.horizon);
    fig.title = "Game vs single-player equilibrium feedback, present-biased discounting";
    fig.table.header = {"s", "theta2_game_eq", "theta2_single_eq"};
    fig.table.columns = {s, gm, sp};
    SvgPanel panel{fig.title, "s", "theta2", {}};
    panel.series = {SvgSeries{"game equilibrium", s, gm}, SvgSeries{"single equilibrium", s, sp}};
    fig.panels.push_back(std::move(panel));
  }
  return fig;
}

FigureData build(int id, const FigureOptions& o) {
  switch (id) {
    case 1:
      return constant_sweep_figure(o, false);
    case 2:
      return equilibrium_sweep_figure(o, 2, false);
    case 3:
      return sandwich_figure(o, 3);
    case 4:
      return constant_sweep_figure(o, true);
    case 5:
      return intensification_figure(o, 5);
    case 6:
      return equilibrium_sweep_figure(o, 6, true);
    case 7:
      return intensification_figure(o, 7);
    case 8:
      return sandwich_figure(o, 8);
    default:
      throw std::invalid_argument("figure id must be 1..8");
  }
}

}  // namespace

CsvTable build_figure(int id, const FigureOptions& options) { return build(id, options).table; }

void emit_figure(int id, const FigureOptions& options, const std::string& out_dir) {
  const FigureData fig = build(id, options);
  std::filesystem::create_directories(out_dir);
  const std::string stem = out_dir + "/fig" + std::to_string(id);
  write_csv_file(stem + ".csv", fig.table);
  write_svg_file(stem + ".svg", fig.title, fig.panels, fig.panels.size() >= 2 ? 2 : 1);
}

}  // namespace tilq
