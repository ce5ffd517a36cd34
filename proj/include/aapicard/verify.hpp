#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aapicard/driver.hpp"

// Test-only oracles and property checks. Shared by the `verify` subcommand and
// the test binaries; nothing in the solver library depends on this.
namespace aapicard::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// --- oracles ---------------------------------------------------------------

// Brute-force minimization of ||w_m + sum_i x_i (w_i - w_m)||_G over the grid
// x_i in {-bound, -bound + step, ..., bound}, i < m. Residuals are free-dof
// vectors, oldest first.
struct GridSearch {
  double best_sq = 0.0;            // smallest squared norm on the grid
  std::vector<double> best_x;
  double resolution_sq = 0.0;      // max excess of the nearest grid point over an interior minimum
  double scale_sq = 0.0;           // ||w_m||^2, for relative roundoff
};

GridSearch grid_search_alpha(const std::vector<std::vector<double>>& residuals, const NormOperator& norm,
                             double step, double bound);

// Plain Picard u <- g(u) without the anderson module; returns ||grad w_k|| for
// k = 1..steps, computed as sqrt(w^T K_ff w) on free dofs.
std::vector<double> hand_rolled_picard(PicardProblem& problem, int steps);

// Random-vector AA run at the given depth: applies aa_step with coefficients
// from solve_alpha and compares against u_{k+1} = sum alpha_j u~_{j+1} and
// sum alpha_j w_j = u_{k+1} - sum alpha_j u_j evaluated directly.
struct IdentityOracle {
  double max_update_mismatch = 0.0;   // aa_step vs direct combination, relative
  double max_direct_identity = 0.0;   // direct identity evaluation, relative
  double max_library_identity = 0.0;  // verify_residual_identity
};

IdentityOracle synthetic_identity(std::uint64_t seed, int depth, int dim, int steps);

// Least-squares slope of log(err) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& err);

struct ManufacturedRates {
  std::vector<int> n;
  std::vector<double> l2;
  std::vector<double> h1;
  double l2_order = 0.0;
  double h1_order = 0.0;
};

ManufacturedRates manufactured_rates(const std::vector<int>& ns, double re);

// --- checks ----------------------------------------------------------------

CheckResult check_skew_symmetry(int n, int pairs, std::uint64_t seed, double tol);
CheckResult check_degeneracy(double re, int n, int steps, double tol);
CheckResult check_optimality_oracle(double re, int n, int windows, double step, double bound);
CheckResult check_collinear_gain(double tol);
CheckResult check_random_gain_bounds(std::uint64_t seed, int trials, double tol);
CheckResult check_identity_oracle(std::uint64_t seed, int depth, double tol);
CheckResult check_manufactured(const std::vector<int>& ns, double re, double l2_order, double h1_order,
                               double band);

// Per-record properties of finished runs.
CheckResult check_gain_bounds(const std::vector<const RunReport*>& reports, double tol);
CheckResult check_identity_records(const std::vector<const RunReport*>& reports, double tol);
CheckResult check_cross_optimality(const std::vector<const RunReport*>& reports, double tol);

// Desk-scale suite used by `aapicard verify` (well under a minute).
std::vector<CheckResult> run_suite();

}  // namespace aapicard::verify
