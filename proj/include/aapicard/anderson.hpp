#pragma once

#include <deque>
#include <span>
#include <vector>

#include "aapicard/norms.hpp"

namespace aapicard {

struct AlphaSolution;

struct AAConfig {
  int depth = 0;                  // m; 0 is plain Picard
  double damping = 1.0;           // beta in (0, 1]
  double regularization = 1e-12;  // Tikhonov factor applied on Cholesky failure

  void validate() const;
};

// History window of depth-m Anderson acceleration. Entry i (0 = oldest) holds
// an iterate u_j, its proposal u~_{j+1} = g(u_j) and residual w_{j+1} =
// u~_{j+1} - u_j. Vectors are full velocity vectors; optimization norms act on
// the `free_dofs` entries only.
class AAState {
 public:
  AAState(int depth, std::vector<int> free_dofs);

  // Appends (u_k, g(u_k), w_{k+1}); evicts the oldest entry beyond depth + 1.
  void push(std::vector<double> iterate, std::vector<double> proposal, std::vector<double> residual);

  int depth() const { return depth_; }
  // Number of stored entries: min(k, m) + 1.
  int size() const { return static_cast<int>(residuals_.size()); }
  // Number of pushes so far.
  int step() const { return steps_; }
  bool empty() const { return residuals_.empty(); }

  const std::vector<double>& iterate(int i) const { return iterates_[i]; }
  const std::vector<double>& proposal(int i) const { return proposals_[i]; }
  const std::vector<double>& residual(int i) const { return residuals_[i]; }
  const std::vector<double>& latest_residual() const { return residuals_.back(); }
  // iterate(i) - iterate(i - 1) as produced by the update, for i >= 1.
  const std::vector<double>& increment(int i) const { return increments_[i]; }

  // u_{k+1} - u_k of the last aa_step, valid until the next push.
  const std::vector<double>& last_increment() const { return last_increment_; }
  const std::vector<int>& free_dofs() const { return free_dofs_; }
  std::vector<double> free_part(std::span<const double> v) const;

 private:
  friend std::vector<double> aa_step(AAState&, const AlphaSolution&, const AAConfig&);

  int depth_;
  int steps_ = 0;
  std::vector<int> free_dofs_;
  std::deque<std::vector<double>> iterates_;
  std::deque<std::vector<double>> proposals_;
  std::deque<std::vector<double>> residuals_;
  std::deque<std::vector<double>> increments_;
  std::vector<double> last_output_;
  std::vector<double> last_increment_;
};

struct AlphaSolution {
  // Coefficients, oldest first; sum to one.
  std::vector<double> alpha;
  // Difference parameterization: gamma_j = alpha_0 + ... + alpha_j, j < size - 1.
  std::vector<double> gamma;
  // sum_j alpha_j w_j over all velocity dofs.
  std::vector<double> combined;
  double theta = 1.0;
  double combined_norm = 0.0;
  double latest_norm = 0.0;
  // Oldest history entries dropped after the regularized Gram stayed singular.
  int dropped = 0;
  bool regularized = false;
  bool rank_deficient = false;
  bool zero_residual = false;
};

// Minimizes ||sum_j alpha_j w_j|| subject to sum_j alpha_j = 1 in the given
// norm via gamma = argmin ||w_latest - D gamma||, D = consecutive residual
// differences, using Cholesky on the normal equations D^T G D.
AlphaSolution solve_alpha(const AAState& state, const NormOperator& norm, double regularization = 1e-12);

// u_{k+1} = beta sum alpha_j u~_{j+1} + (1 - beta) sum alpha_j u_j, evaluated
// as u_k plus an increment assembled from stored residuals and increments.
std::vector<double> aa_step(AAState& state, const AlphaSolution& alpha, const AAConfig& config);

// Relative l2 mismatch of
//   sum alpha_j w_j = e_{k+1} + (1 - alpha_k) e_k + ... + (1 - sum_{j>k-m} alpha_j) e_{k+1-m}
// for the last aa_step (undamped steps only).
double verify_residual_identity(const AAState& state, const AlphaSolution& alpha);

}  // namespace aapicard
