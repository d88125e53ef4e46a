#include "tilq/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>

#include "tilq/grid.hpp"

namespace tilq {

Partition Partition::uniform(double horizon, int n_intervals) {
  if (n_intervals < 1) throw std::invalid_argument("partition: need at least one interval");
  Partition pi;
  pi.points.resize(n_intervals + 1);
  for (int i = 0; i <= n_intervals; ++i) pi.points[i] = horizon * i / n_intervals;
  pi.points.front() = 0.0;
  pi.points.back() = horizon;
  return pi;
}

double Partition::mesh() const {
  double m = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) m = std::max(m, points[i] - points[i - 1]);
  return m;
}

void Partition::validate(double horizon) const {
  if (points.size() < 2) throw std::invalid_argument("partition: need at least two points");
  if (std::abs(points.front()) > 1e-12 || std::abs(points.back() - horizon) > 1e-9)
    throw std::invalid_argument("partition: must span [0, T]");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i] > points[i - 1]))
      throw std::invalid_argument("partition: points must be strictly increasing");
}

double TriangularKernel::at_nodes(int i, int j) const {
  if (i < 0 || j < i || j >= static_cast<int>(grid.size()))
    throw std::domain_error("kernel: node outside triangle");
  return rows[i][j - i];
}

double TriangularKernel::value(double t, double s) const {
  const double T = grid.back();
  if (!(t >= grid.front() - 1e-12 && t <= T + 1e-12) || !(s >= t - 1e-12))
    throw std::domain_error("kernel: (t, s) outside the triangle");
  s = std::min(std::max(s, t), T);
  const int n = static_cast<int>(grid.size()) - 1;
  const int i = (t >= grid[n]) ? n : static_cast<int>(locate_interval(grid, t));
  const auto& row = rows[i];
  if (row.size() == 1) return row[0];
  const double sc = std::min(std::max(s, grid[i]), T);
  std::size_t j = std::min(locate_interval(grid, sc), grid.size() - 2);
  j = std::max(j, static_cast<std::size_t>(i));
  const double w = (sc - grid[j]) / (grid[j + 1] - grid[j]);
  return row[j - i] + w * (row[j + 1 - i] - row[j - i]);
}

std::size_t TriangularKernel::node_count() const {
  std::size_t n = 0;
  for (const auto& row : rows) n += row.size();
  return n;
}

void TriangularKernel::validate() const {
  if (rows.size() != grid.size()) throw std::invalid_argument("kernel: row count mismatch");
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].size() != grid.size() - i)
      throw std::invalid_argument("kernel: ragged row has wrong length");
}

double GammaCurve::at(double t) const { return interp_linear(grid, values, t); }

namespace {

// Factored discount tables: alpha(x - t_k) splits into per-node exponential
// tables times two row-constant factors, so the O(N^2 f) quadratures pay
// two multiplies per node instead of two exp calls.
struct AlphaTables {
  const DiscountSpec* spec;
  std::vector<double> erho;  // e^{-rho x} at the fine nodes
  std::vector<double> egam;  // e^{-gamma x} (mixture only)

  void build(const DiscountSpec& d, std::span<const double> x) {
    spec = &d;
    erho.resize(x.size());
    egam.assign(x.size(), 0.0);
    for (std::size_t m = 0; m < x.size(); ++m) erho[m] = std::exp(-d.rho * x[m]);
    if (d.kind == DiscountKind::mixture)
      for (std::size_t m = 0; m < x.size(); ++m) egam[m] = std::exp(-d.gamma * x[m]);
  }

  struct RowFactors {
    double fr, fg;
  };
  RowFactors offset(double t) const {
    if (spec->kind == DiscountKind::exponential) return {std::exp(spec->rho * t), 0.0};
    return {spec->lambda * std::exp(spec->rho * t),
            (1.0 - spec->lambda) * std::exp(spec->gamma * t)};
  }
  double at(const RowFactors& f, std::size_t m) const {
    return f.fr * erho[m] + f.fg * egam[m];
  }
};

// Shared machinery for the single-player and game recursions. The two
// differ only in the weight of the reciprocal-form integrand ((1-R) for
// the game, 1 for the single player, both over alpha R) and in whether
// theta1 is emitted; the tail-extension source -theta1^2 + R theta2^2
// covers both since theta1 = 0 collapses it to R theta2^2.
struct RecursionContext {
  const ModelParams* params;
  const Partition* partition;
  int f = 8;                  // trapezoid panels per subinterval
  bool game = false;
  double recip_weight = 1.0;  // numerator of the reciprocal integrand

  std::vector<double> fine;   // N*f + 1 nodes
  AlphaTables tables;
  // Row-k gains at the fine nodes of subinterval k, both endpoints
  // included; index [k][j], j = 0..f. The j = f entry is row k's left
  // limit at t_{k+1}, which is what the quadrature needs there.
  std::vector<std::vector<double>> th1;
  std::vector<std::vector<double>> th2;
  std::vector<double> diag;   // P(t_k, t_k), k = 0..N (diag[N] = 1)

  // Lyapunov tail extension of row k over [t_{k+1}, T], walked backward on
  // the fine grid with an incrementally accumulated integrating factor.
  // Records partition-node values into row_out when given. Returns
  // P(t_k, t_{k+1}).
  double extend_row(int k, std::vector<double>* row_out) const {
    const int n = partition->intervals();
    const double t_k = partition->points[k];
    const double sig2 = params->sigma * params->sigma;
    const double r_cost = params->effort_cost_ratio;
    const auto af = tables.offset(t_k);
    const int m_stop = (k + 1) * f;
    double a = alpha(params->discount, params->horizon - t_k);  // exact terminal value
    if (row_out) (*row_out)[n - k] = a;
    for (int m = n * f - 1; m >= m_stop; --m) {
      const int sub = m / f;
      const int j = m % f;
      const double w = fine[m + 1] - fine[m];
      const double d0 = 2.0 * (th1[sub][j] + th2[sub][j]) + sig2;
      const double d1 = 2.0 * (th1[sub][j + 1] + th2[sub][j + 1]) + sig2;
      const double g = std::exp(0.5 * w * (d0 + d1));
      const double q0 = -th1[sub][j] * th1[sub][j] + r_cost * th2[sub][j] * th2[sub][j];
      const double q1 =
          -th1[sub][j + 1] * th1[sub][j + 1] + r_cost * th2[sub][j + 1] * th2[sub][j + 1];
      a = g * a + 0.5 * w * (tables.at(af, m) * q0 + g * tables.at(af, m + 1) * q1);
      if (j == 0 && row_out) (*row_out)[sub - k] = a;
    }
    return a;
  }

  // Reciprocal-form Riccati segment of row k on [t_k, t_{k+1}], seeded by
  // the tail value. Fills the row's gains and returns P(t_k, t_k).
  double reciprocal_segment(int k, double seed) {
    if (!(seed > 0.0))
      throw SolverError("partition recursion: non-positive seed entering a subinterval");
    const double t_k = partition->points[k];
    const double sig2 = params->sigma * params->sigma;
    const double r_cost = params->effort_cost_ratio;
    const auto af = tables.offset(t_k);
    const std::size_t base = static_cast<std::size_t>(k) * f;
    std::vector<double> p(f + 1);
    p[f] = seed;
    double den = 1.0 / seed;
    for (int j = f - 1; j >= 0; --j) {
      const double w = fine[base + j + 1] - fine[base + j];
      const double e = std::exp(-sig2 * w);
      const double g0 = recip_weight / (tables.at(af, base + j) * r_cost);
      const double g1 = recip_weight / (tables.at(af, base + j + 1) * r_cost);
      den = e * den + 0.5 * w * (g0 + e * g1);
      if (!(den > 0.0))
        throw SolverError("partition recursion: non-positive quadrature denominator");
      p[j] = 1.0 / den;
    }
    for (int j = 0; j <= f; ++j) {
      const double a = (j == 0) ? 1.0 : tables.at(af, base + j);  // alpha(0) = 1
      th1[k][j] = game ? p[j] / a : 0.0;
      th2[k][j] = -p[j] / (r_cost * a);
    }
    return p[0];
  }
};

struct SolveOutput {
  TriangularKernel kernel;
  StrategyCurve theta1;
  StrategyCurve theta2;
};

SolveOutput solve_partition(const ModelParams& params, const Partition& partition,
                            int subgrid_factor, bool game) {
  params.validate();
  partition.validate(params.horizon);
  if (subgrid_factor < 1) throw std::invalid_argument("subgrid factor must be >= 1");

  RecursionContext ctx;
  ctx.params = &params;
  ctx.partition = &partition;
  ctx.f = subgrid_factor;
  ctx.game = game;
  ctx.recip_weight = game ? 1.0 - params.effort_cost_ratio : 1.0;

  const int n = partition.intervals();
  const int f = subgrid_factor;
  ctx.fine.resize(static_cast<std::size_t>(n) * f + 1);
  for (int k = 0; k < n; ++k) {
    const double a = partition.points[k];
    const double b = partition.points[k + 1];
    for (int j = 0; j < f; ++j)
      ctx.fine[static_cast<std::size_t>(k) * f + j] = a + (b - a) * j / f;
    ctx.fine[static_cast<std::size_t>(k) * f] = a;
  }
  ctx.fine.back() = params.horizon;
  ctx.tables.build(params.discount, ctx.fine);

  ctx.th1.assign(n, std::vector<double>(f + 1, 0.0));
  ctx.th2.assign(n, std::vector<double>(f + 1, 0.0));
  ctx.diag.assign(n + 1, 0.0);
  ctx.diag[n] = 1.0;  // alpha(0)

  TriangularKernel kernel;
  kernel.grid = partition.points;
  kernel.rows.resize(n + 1);
  kernel.rows[n] = {1.0};

  // Backward over subintervals; gains become final the moment they are
  // created, so later tail extensions read only finished values. Each
  // extension walks the whole tail anyway (its end value seeds the next
  // reciprocal segment), so the triangle rows are recorded along the way.
  for (int k = n - 1; k >= 0; --k) {
    kernel.rows[k].assign(n + 1 - k, 0.0);
    const double seed = ctx.extend_row(k, &kernel.rows[k]);
    ctx.diag[k] = ctx.reciprocal_segment(k, seed);
    kernel.rows[k][0] = ctx.diag[k];
  }

  // A-priori bounds; violations beyond rounding mean the recursion left
  // its validity region.
  const double sig2 = params.sigma * params.sigma;
  const double tol = 1e-8 * std::exp(std::abs(sig2) * params.horizon);
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      const double v = kernel.rows[i][j - i];
      const double cap = std::exp(sig2 * (params.horizon - partition.points[j]));
      if (!(v >= -tol) || !(v <= cap + tol))
        throw SolverError("partition recursion: kernel left its a-priori envelope");
    }
  }

  SolveOutput out;
  out.kernel = std::move(kernel);
  out.theta2.grid = partition.points;
  out.theta2.values.resize(n + 1);
  const double r_cost = params.effort_cost_ratio;
  for (int k = 0; k <= n; ++k) out.theta2.values[k] = -ctx.diag[k] / r_cost;
  out.theta1.grid = partition.points;
  if (game)
    out.theta1.values = ctx.diag;
  else
    out.theta1.values.assign(n + 1, 0.0);
  return out;
}

}  // namespace

SinglePlayerEquilibrium single_partition_solve(const ModelParams& params,
                                               const Partition& partition, int subgrid_factor) {
  auto out = solve_partition(params, partition, subgrid_factor, /*game=*/false);
  return SinglePlayerEquilibrium{std::move(out.kernel), std::move(out.theta2)};
}

GameEquilibrium game_partition_solve(const ModelParams& params, const Partition& partition,
                                     int subgrid_factor) {
  auto out = solve_partition(params, partition, subgrid_factor, /*game=*/true);
  return GameEquilibrium{std::move(out.kernel), std::move(out.theta1), std::move(out.theta2)};
}

RefineResult refine_to_tolerance(ProblemKind kind, const ModelParams& params, double tol,
                                 const RefineOptions& options) {
  if (!(tol > 0.0)) throw std::invalid_argument("refine: tolerance must be positive");
  params.validate();

  RefineResult result;
  StrategyCurve prev2;
  int n = options.initial_intervals;
  for (int level = 0; level <= options.max_doublings; ++level, n *= 2) {
    const Partition pi = Partition::uniform(params.horizon, n);
    StrategyCurve th1, th2;
    if (kind == ProblemKind::game) {
      auto sol = game_partition_solve(params, pi, options.subgrid_factor);
      th1 = std::move(sol.theta1);
      th2 = std::move(sol.theta2);
    } else {
      auto sol = single_partition_solve(params, pi, options.subgrid_factor);
      th1 = StrategyCurve::zero(params.horizon);
      th2 = std::move(sol.theta2);
    }
    if (level > 0) {
      double d = 0.0;
      for (std::size_t i = 0; i < prev2.grid.size(); ++i)
        d = std::max(d, std::abs(th2.at(prev2.grid[i]) - prev2.values[i]));
      result.step_distances.push_back(d);
      result.achieved = d;
    }
    result.partition = pi;
    result.theta1 = std::move(th1);
    result.theta2 = th2;
    prev2 = std::move(th2);
    if (result.step_distances.size() >= 2) {
      const auto& ds = result.step_distances;
      result.empirical_order = std::log2(ds[ds.size() - 2] / ds.back());
    }
    if (std::isinf(tol)) return result;  // vacuous stopping rule
    if (!result.step_distances.empty() && result.achieved < tol) return result;
  }
  std::ostringstream msg;
  msg << "refine: cap reached at N = " << result.partition.intervals()
      << ", achieved sup distance " << result.achieved << " > tol " << tol;
  throw RefinementError(msg.str(), std::move(result));
}

GammaCurve vdie_solve(const ModelParams& params, std::span<const double> grid) {
  params.validate();
  if (grid.size() < 2) throw std::invalid_argument("vdie: grid needs >= 2 points");
  if (std::abs(grid.front()) > 1e-12 || std::abs(grid.back() - params.horizon) > 1e-9)
    throw std::invalid_argument("vdie: grid must span [0, T]");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("vdie: grid must be increasing");

  const double sig2 = params.sigma * params.sigma;
  const double c = (1.0 - params.effort_cost_ratio) / params.effort_cost_ratio;
  const double T = params.horizon;
  const std::size_t m_last = grid.size() - 1;

  // -alpha'(x) factored like the solver tables: dr * e^{-rho x} (+ mixture
  // term), with the row factors supplied per evaluation time t.
  const DiscountSpec& d = params.discount;
  std::vector<double> erho(grid.size()), egam(grid.size(), 0.0);
  for (std::size_t m = 0; m < grid.size(); ++m) erho[m] = std::exp(-d.rho * grid[m]);
  if (d.kind == DiscountKind::mixture)
    for (std::size_t m = 0; m < grid.size(); ++m) egam[m] = std::exp(-d.gamma * grid[m]);

  std::vector<double> gam(grid.size()), cexp(grid.size()), expneg(grid.size());
  gam[m_last] = 1.0;
  cexp[m_last] = 0.0;  // cexp[m] = int_{grid[m]}^{T} [sigma^2 - 2 c Gamma] dr
  expneg[m_last] = 1.0;

  const auto b_of = [&](double g) { return sig2 - 2.0 * c * g; };
  const auto dalpha0 = -alpha_derivative(d, 0.0);

  // Gamma'(t) given the value g at t, the accumulated exponent, and the
  // tail quadrature (which excludes the own-node term of weight own_w).
  const auto rate = [&](double t, double g, double cexp_t, double tail_sum, double own_w) {
    const double dalpha_T = -alpha_derivative(d, T - t);
    const double nonlocal = std::exp(cexp_t) * dalpha_T + tail_sum + own_w * dalpha0 * c * g * g;
    return -sig2 * g + c * g * g + nonlocal;
  };

  // Trapezoid tail over nodes m0..M of e^{cexp_t - cexp_m} (-alpha')(g_m - t) c Gamma_m^2.
  const auto tail_sum_at = [&](double t, std::size_t m0, double cexp_t) {
    const double fr =
        (d.kind == DiscountKind::mixture ? d.lambda : 1.0) * d.rho * std::exp(d.rho * t);
    const double fg = (d.kind == DiscountKind::mixture)
                          ? (1.0 - d.lambda) * d.gamma * std::exp(d.gamma * t)
                          : 0.0;
    const double scale = std::exp(cexp_t);
    double s = 0.0;
    for (std::size_t m = m0; m <= m_last; ++m) {
      const double w = 0.5 * ((m < m_last ? grid[m + 1] : grid[m]) - grid[m - 1]);
      const double da = fr * erho[m] + fg * egam[m];
      s += w * expneg[m] * da * c * gam[m] * gam[m];
    }
    return scale * s;
  };

  double f_next = rate(T, 1.0, 0.0, 0.0, 0.0);
  for (std::size_t j = m_last; j-- > 0;) {
    const double h = grid[j + 1] - grid[j];
    const double own_w = 0.5 * h;
    const double g_pred = gam[j + 1] - h * f_next;
    const double cexp_pred = cexp[j + 1] + 0.5 * h * (b_of(g_pred) + b_of(gam[j + 1]));
    // tail sum is evaluated once per step; cexp enters as a scalar factor
    const double tail_unscaled = tail_sum_at(grid[j], j + 1, 0.0);
    const double f_pred =
        rate(grid[j], g_pred, cexp_pred, std::exp(cexp_pred) * tail_unscaled, own_w);
    gam[j] = gam[j + 1] - 0.5 * h * (f_next + f_pred);
    cexp[j] = cexp[j + 1] + 0.5 * h * (b_of(gam[j]) + b_of(gam[j + 1]));
    expneg[j] = std::exp(-cexp[j]);
    const double cap = std::exp(sig2 * (T - grid[j]));
    if (!(gam[j] >= -1e-9) || !(gam[j] <= cap * (1.0 + 1e-9) + 1e-9))
      throw SolverError("vdie: Gamma left the a-priori envelope [0, Xi]");
    f_next = rate(grid[j], gam[j], cexp[j], std::exp(cexp[j]) * tail_unscaled, own_w);
  }

  GammaCurve out;
  out.grid.assign(grid.begin(), grid.end());
  out.values = std::move(gam);
  return out;
}

TriangularKernel reconstruct_kernel(const GammaCurve& gamma, const ModelParams& params,
                                    int row_stride, ExecutionPolicy policy) {
  params.validate();
  if (gamma.grid.size() < 2 || gamma.grid.size() != gamma.values.size())
    throw std::invalid_argument("reconstruct: bad gamma curve");
  if (std::abs(gamma.grid.front()) > 1e-12 ||
      std::abs(gamma.grid.back() - params.horizon) > 1e-9)
    throw std::invalid_argument("reconstruct: gamma grid must span [0, T]");
  if (row_stride < 1) throw std::invalid_argument("reconstruct: stride must be >= 1");
  const std::size_t m_fine = gamma.grid.size() - 1;
  if (m_fine % row_stride != 0)
    throw std::invalid_argument("reconstruct: stride must divide the gamma grid");

  const double sig2 = params.sigma * params.sigma;
  const double c = (1.0 - params.effort_cost_ratio) / params.effort_cost_ratio;
  const std::size_t n_out = m_fine / row_stride;

  AlphaTables tables;
  tables.build(params.discount, gamma.grid);

  TriangularKernel kernel;
  kernel.grid.resize(n_out + 1);
  for (std::size_t i = 0; i <= n_out; ++i) kernel.grid[i] = gamma.grid[i * row_stride];
  kernel.rows.assign(n_out + 1, {});
  for (std::size_t i = 0; i <= n_out; ++i) kernel.rows[i].assign(n_out + 1 - i, 0.0);

  const auto fill_row = [&](std::size_t i_out) {
    const double t = kernel.grid[i_out];
    const std::size_t m0 = i_out * row_stride;
    const auto af = tables.offset(t);
    double a = alpha(params.discount, params.horizon - t);
    kernel.rows[i_out][n_out - i_out] = a;
    for (std::size_t m = m_fine; m-- > m0;) {
      const double w = gamma.grid[m + 1] - gamma.grid[m];
      const double b0 = sig2 - 2.0 * c * gamma.values[m];
      const double b1 = sig2 - 2.0 * c * gamma.values[m + 1];
      const double g = std::exp(0.5 * w * (b0 + b1));
      const double q0 = tables.at(af, m) * c * gamma.values[m] * gamma.values[m];
      const double q1 = tables.at(af, m + 1) * c * gamma.values[m + 1] * gamma.values[m + 1];
      a = g * a + 0.5 * w * (q0 + g * q1);
      if (m % row_stride == 0) kernel.rows[i_out][m / row_stride - i_out] = a;
    }
  };

  if (policy == ExecutionPolicy::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long long i = 0; i <= static_cast<long long>(n_out); ++i)
      fill_row(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i <= n_out; ++i) fill_row(i);
  }
  return kernel;
}

double symmetric_kernel(const ModelParams& params, double t, double s) {
  params.validate();
  if (std::abs(params.effort_cost_ratio - 1.0) > 1e-12)
    throw std::invalid_argument("symmetric kernel requires R = 1");
  if (!(t >= 0.0 && t <= s && s <= params.horizon + 1e-12))
    throw std::domain_error("symmetric kernel: need 0 <= t <= s <= T");
  const double sig2 = params.sigma * params.sigma;
  return std::exp(sig2 * (params.horizon - s)) * alpha(params.discount, params.horizon - t);
}

}  // namespace tilq
