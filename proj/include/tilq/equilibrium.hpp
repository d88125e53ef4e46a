#pragma once

#include <limits>
#include <span>
#include <vector>

#include "tilq/riccati.hpp"

namespace tilq {

struct Partition {
  std::vector<double> points;  // strictly increasing, points[0] = 0, back = T

  static Partition uniform(double horizon, int n_intervals);

  int intervals() const { return static_cast<int>(points.size()) - 1; }
  double mesh() const;
  void validate(double horizon) const;
};

// Two-time kernel P(t, s) sampled on the discrete triangle {t_i <= s_j} of
// a shared grid. Row i holds the values P(t_i, s_j) for j >= i. As a
// function, the kernel is piecewise constant in t (row i owns
// t in [t_i, t_{i+1})) and linearly interpolated in s along each row,
// matching the backward recursion that produces it.
struct TriangularKernel {
  std::vector<double> grid;
  std::vector<std::vector<double>> rows;

  double at_nodes(int i, int j) const;  // P(grid[i], grid[j]), j >= i
  double value(double t, double s) const;
  std::size_t node_count() const;
  void validate() const;
};

// Diagonal curve Gamma(t) = P(t, t) produced by the Volterra
// differential-integral solver. Gamma(T) = 1.
struct GammaCurve {
  std::vector<double> grid;
  std::vector<double> values;

  double at(double t) const;
};

// Data-parallel kernels (Monte Carlo paths, kernel reconstruction, spike
// sweeps) run under OpenMP when `parallel`; `serial` keeps the reference
// single-thread ordering. Both produce bit-identical results.
enum class ExecutionPolicy { serial, parallel };

struct SinglePlayerEquilibrium {
  TriangularKernel kernel;
  StrategyCurve theta2;  // diagonal gains, theta2(t_k) = -P(t_k,t_k)/R
};

struct GameEquilibrium {
  TriangularKernel kernel;
  StrategyCurve theta1;  // theta1(t_k) = P(t_k,t_k)
  StrategyCurve theta2;  // theta2(t_k) = -P(t_k,t_k)/R
};

// Backward partition recursion for the single-player problem (u1 = 0)
// under mixture discounting: reciprocal-form Riccati segment on each fresh
// subinterval, integral-form Lyapunov extension over the tail, gains
// theta2(s) = -P(t_k; s) / (alpha(s - t_k) R). subgrid_factor is the number
// of trapezoid panels per subinterval used for all quadratures.
SinglePlayerEquilibrium single_partition_solve(const ModelParams& params,
                                               const Partition& partition,
                                               int subgrid_factor = 8);

// Game recursion: reciprocal segment carries the (1-R)/R weight, the tail
// extension integrates alpha(r - t_k) [ -theta1^2 + R theta2^2 ] under the
// drift 2(theta1 + theta2) + sigma^2. Enforces 0 <= P <= e^{sigma^2 (T-s)}
// and P(t,s) <= P(s,s) up to a small tolerance, else throws SolverError.
// The recursion is inherently backward-sequential: every tail extension
// reads the gains of all later subintervals, and walking a row's tail is
// exactly what produces its seed, so the triangle rows are recorded as the
// recursion passes over them.
GameEquilibrium game_partition_solve(const ModelParams& params, const Partition& partition,
                                     int subgrid_factor = 8);

enum class ProblemKind { single_player, game };

struct RefineOptions {
  int initial_intervals = 250;
  int max_doublings = 8;
  int subgrid_factor = 8;
};

struct RefineResult {
  Partition partition;   // finest partition solved
  StrategyCurve theta1;  // identically zero for the single-player problem
  StrategyCurve theta2;
  std::vector<double> step_distances;  // sup distance between successive diagonals
  double achieved = std::numeric_limits<double>::infinity();
  double empirical_order = std::numeric_limits<double>::quiet_NaN();
};

struct RefinementError : SolverError {
  RefineResult last;
  RefinementError(const std::string& what, RefineResult r)
      : SolverError(what), last(std::move(r)) {}
};

// Doubles the partition until the sup distance between successive diagonal
// strategy curves drops below tol. Records the empirical convergence order
// (expected ~1 in the mesh). Throws RefinementError carrying the last
// iterate when the doubling cap is hit first. tol = infinity returns the
// first iterate unchanged.
RefineResult refine_to_tolerance(ProblemKind kind, const ModelParams& params, double tol,
                                 const RefineOptions& options = {});

// Backward Heun march of the Volterra differential-integral equation for
// the diagonal Gamma(t) = P(t, t); the non-local terms are evaluated by
// trapezoid quadrature over the already-computed tail. Independent of the
// partition recursion; used as a cross-check oracle.
GammaCurve vdie_solve(const ModelParams& params, std::span<const double> grid);

// Rebuilds the two-time kernel from a diagonal curve:
//   P(t,s) = int_s^T e^{int_s^tau [sigma^2 - 2(1-R)/R Gamma]} alpha(tau-t) (1-R)/R Gamma(tau)^2 dtau
//          + e^{int_s^T [sigma^2 - 2(1-R)/R Gamma]} alpha(T-t).
// Rows are emitted every row_stride gamma nodes (quadrature always runs on
// the full gamma grid). The diagonal reproduces Gamma up to quadrature
// error.
TriangularKernel reconstruct_kernel(const GammaCurve& gamma, const ModelParams& params,
                                    int row_stride = 1,
                                    ExecutionPolicy policy = ExecutionPolicy::parallel);

// Exact kernel e^{sigma^2 (T-s)} alpha(T-t) of the symmetric game (R = 1).
// Requires R = 1 and 0 <= t <= s <= T.
double symmetric_kernel(const ModelParams& params, double t, double s);

}  // namespace tilq
