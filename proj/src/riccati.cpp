#include "tilq/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tilq/grid.hpp"

namespace tilq {

namespace {
// Below this, the closed forms are 0/0 and the analytic rho = sigma^2
// limits take over.
constexpr double kDegeneracyThreshold = 1e-10;
}  // namespace

void ModelParams::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("params: horizon must be positive");
  if (!(effort_cost_ratio > 0.0 && effort_cost_ratio <= 1.0))
    throw std::invalid_argument("params: effort cost ratio R must satisfy 0 < R <= 1");
  if (!std::isfinite(sigma)) throw std::invalid_argument("params: sigma must be finite");
  discount.validate();
}

double StrategyCurve::at(double s) const { return interp_linear(grid, values, s); }

void StrategyCurve::validate() const {
  if (grid.size() < 2 || grid.size() != values.size())
    throw std::invalid_argument("strategy curve: grid/value size mismatch");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("strategy curve: grid must be strictly increasing");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("strategy curve: non-finite value");
}

StrategyCurve StrategyCurve::zero(double horizon) {
  return StrategyCurve{{0.0, horizon}, {0.0, 0.0}};
}

namespace {
void require_time_in_horizon(double s, double horizon) {
  if (!(s >= 0.0 && s <= horizon)) throw std::domain_error("time outside [0, T]");
}

void require_exponential(const ModelParams& params) {
  if (params.discount.kind != DiscountKind::exponential)
    throw std::invalid_argument("constant-discount gains require an exponential discount");
}
}  // namespace

double single_constant_gain(const ModelParams& params, double s) {
  params.validate();
  require_exponential(params);
  require_time_in_horizon(s, params.horizon);
  const double T = params.horizon;
  const double R = params.effort_cost_ratio;
  const double b = params.discount.rho - params.sigma * params.sigma;
  if (std::abs(b) < kDegeneracyThreshold) return -1.0 / (R + T - s);
  const double num = -b * std::exp(b * s);
  const double den = (1.0 + R * b) * std::exp(b * T) - std::exp(b * s);
  return num / den;
}

std::pair<double, double> game_constant_gains(const ModelParams& params, double s) {
  params.validate();
  require_exponential(params);
  require_time_in_horizon(s, params.horizon);
  const double T = params.horizon;
  const double R = params.effort_cost_ratio;
  const double b = params.discount.rho - params.sigma * params.sigma;
  double p;  // Riccati solution with P(T) = 1
  if (std::abs(b) < kDegeneracyThreshold) {
    p = R / (R + (1.0 - R) * (T - s));
  } else {
    p = R * b * std::exp(b * s) /
        ((1.0 - R + R * b) * std::exp(b * T) - (1.0 - R) * std::exp(b * s));
  }
  return {p, -p / R};
}

std::vector<double> solve_auxiliary_riccati(const AuxiliaryGameSpec& spec, double sigma,
                                            double horizon, std::span<const double> grid) {
  if (!spec.cost1 || !spec.cost2)
    throw std::invalid_argument("auxiliary game: cost functions must be set");
  if (!(spec.terminal_weight >= 0.0))
    throw std::invalid_argument("auxiliary game: terminal weight G must be >= 0");
  if (grid.size() < 2) throw std::invalid_argument("auxiliary game: grid needs >= 2 points");
  if (std::abs(grid.front()) > 1e-12 || std::abs(grid.back() - horizon) > 1e-9)
    throw std::invalid_argument("auxiliary game: grid must span [0, T]");

  for (double s : grid) {
    if (!(spec.cost1(s) < 0.0))
      throw std::invalid_argument("auxiliary game: R1 must be negative on the grid");
    if (!(spec.cost2(s) > 0.0))
      throw std::invalid_argument("auxiliary game: R2 must be positive on the grid");
  }

  const double sig2 = sigma * sigma;
  const auto rhs = [&](double s, double p) {
    const double r1 = spec.cost1(s);
    const double r2 = spec.cost2(s);
    return (spec.rate - sig2) * p + (r1 + r2) / (r1 * r2) * p * p;
  };
  const double envelope_scale = std::max(spec.terminal_weight, 1.0);

  const std::size_t n = grid.size();
  std::vector<double> p(n);
  p[n - 1] = spec.terminal_weight;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double s1 = grid[i + 1];
    const double h = grid[i + 1] - grid[i];
    const double y = p[i + 1];
    const double k1 = rhs(s1, y);
    const double k2 = rhs(s1 - 0.5 * h, y - 0.5 * h * k1);
    const double k3 = rhs(s1 - 0.5 * h, y - 0.5 * h * k2);
    const double k4 = rhs(s1 - h, y - h * k3);
    p[i] = y - h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double bound = 10.0 * envelope_scale * std::exp((sig2 - spec.rate) * (horizon - grid[i]));
    if (!std::isfinite(p[i]) || std::abs(p[i]) > bound)
      throw SolverError("auxiliary Riccati blow-up: sign condition on (R1, R2) violated");
  }
  return p;
}

double lyapunov_envelope(double sigma, double horizon, double s) {
  require_time_in_horizon(s, horizon);
  return std::exp(sigma * sigma * (horizon - s));
}

}  // namespace tilq
