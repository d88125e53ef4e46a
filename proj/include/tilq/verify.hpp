#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tilq/riccati.hpp"

namespace tilq {

// Sizes for the verification suites. The defaults keep `tilq verify`
// interactive; the acceptance binary pins the full-size configuration.
struct VerifyOptions {
  std::uint64_t seed = 42;
  ModelParams baseline;  // T=10, sigma=0.25, rho=0.15, R=0.5 exponential

  int oracle_steps = 10000;       // RK4 re-derivation grid
  int sym_intervals = 1000;       // symmetric ERE check, doubled once for the ratio
  int cross_intervals = 2000;     // partition size for the cross-oracle check
  int vdie_nodes = 4000;          // VDIE grid for the diagonal comparison
  int reconstruct_nodes = 16000;  // VDIE grid behind the reconstruction identity
  int sweep_count = 20;           // random-parameter a-priori bound sweep
  int sweep_intervals = 300;
  int spike_intervals = 2000;     // equilibrium resolution for spike checks
  int spike_grid = 5;             // 5x5 (t, u_dev) grid
  int degeneracy_intervals = 1000;
  int mc_paths = 20000;
  int mc_steps = 500;
  int subgrid_factor = 8;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // deterministic numeric summary
};

// Mixture baseline used throughout: lambda=0.5, gamma=0.3 over the
// exponential baseline above.
ModelParams baseline_exponential();
ModelParams baseline_mixture();

std::vector<CheckResult> run_verification(const VerifyOptions& options);

// Deterministic plain-text table; byte-identical for identical options,
// independent of thread count.
std::string render_report(const VerifyOptions& options, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

// Individual suites (shared with the acceptance tests).
CheckResult check_closed_forms_vs_rk4(const VerifyOptions&);
CheckResult check_symmetric_ere(const VerifyOptions&);
CheckResult check_cross_oracle(const VerifyOptions&);
CheckResult check_apriori_bounds(const VerifyOptions&);
CheckResult check_spike_game(const VerifyOptions&);
CheckResult check_spike_single(const VerifyOptions&);
CheckResult check_degeneracy_collapse(const VerifyOptions&);
CheckResult check_figure_orderings(const VerifyOptions&);
CheckResult check_monte_carlo(const VerifyOptions&);

}  // namespace tilq
