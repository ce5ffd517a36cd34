#include "aapicard/anderson.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "aapicard/dense.hpp"
#include "aapicard/sparse.hpp"

namespace aapicard {

void AAConfig::validate() const {
  if (depth < 0) throw std::invalid_argument("AA depth must be non-negative");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("AA damping must lie in (0, 1]");
  if (!(regularization >= 0.0)) throw std::invalid_argument("AA regularization must be non-negative");
}

AAState::AAState(int depth, std::vector<int> free_dofs) : depth_(depth), free_dofs_(std::move(free_dofs)) {
  if (depth < 0) throw std::invalid_argument("AAState: depth must be non-negative");
}

void AAState::push(std::vector<double> iterate, std::vector<double> proposal, std::vector<double> residual) {
  if (iterate.size() != proposal.size() || iterate.size() != residual.size()) {
    throw std::invalid_argument("AAState::push: vector lengths differ");
  }
  if (!iterates_.empty() && iterate.size() != iterates_.back().size()) {
    throw std::invalid_argument("AAState::push: vector length changed");
  }

  std::vector<double> increment;
  if (!last_output_.empty() && iterate == last_output_) {
    increment = std::move(last_increment_);
  } else if (!iterates_.empty()) {
    increment.resize(iterate.size());
    for (std::size_t i = 0; i < iterate.size(); ++i) increment[i] = iterate[i] - iterates_.back()[i];
  }
  last_output_.clear();
  last_increment_.clear();

  iterates_.push_back(std::move(iterate));
  proposals_.push_back(std::move(proposal));
  residuals_.push_back(std::move(residual));
  increments_.push_back(std::move(increment));
  ++steps_;
  while (static_cast<int>(residuals_.size()) > depth_ + 1) {
    iterates_.pop_front();
    proposals_.pop_front();
    residuals_.pop_front();
    increments_.pop_front();
  }
}

std::vector<double> AAState::free_part(std::span<const double> v) const {
  if (free_dofs_.empty()) return {v.begin(), v.end()};
  std::vector<double> out(free_dofs_.size());
  for (std::size_t i = 0; i < free_dofs_.size(); ++i) out[i] = v[free_dofs_[i]];
  return out;
}

namespace {

std::vector<double> alpha_from_gamma(const std::vector<double>& gamma) {
  const std::size_t m = gamma.size();
  std::vector<double> alpha(m + 1);
  if (m == 0) {
    alpha[0] = 1.0;
    return alpha;
  }
  alpha[0] = gamma[0];
  for (std::size_t j = 1; j < m; ++j) alpha[j] = gamma[j] - gamma[j - 1];
  alpha[m] = 1.0 - gamma[m - 1];
  return alpha;
}

}  // namespace

AlphaSolution solve_alpha(const AAState& state, const NormOperator& norm, double regularization) {
  if (state.empty()) throw std::invalid_argument("solve_alpha: no residuals stored");
  const int n = state.size();
  const int m = n - 1;

  std::vector<std::vector<double>> w(n);
  for (int i = 0; i < n; ++i) w[i] = state.free_part(state.residual(i));
  const auto& latest = w[m];

  AlphaSolution sol;
  sol.latest_norm = norm.norm(latest);
  sol.gamma.assign(m, 0.0);

  if (sol.latest_norm == 0.0) {
    sol.zero_residual = true;
    sol.alpha = alpha_from_gamma(sol.gamma);
    sol.combined = state.latest_residual();
    sol.theta = 0.0;
    return sol;
  }

  // Column j of D: w_{j+1} - w_j.
  std::vector<std::vector<double>> d(m), gd(m);
  for (int j = 0; j < m; ++j) {
    d[j].resize(latest.size());
    for (std::size_t i = 0; i < latest.size(); ++i) d[j][i] = w[j + 1][i] - w[j][i];
  }

  for (int first = 0; first < m; ++first) {
    const int cols = m - first;
    for (int j = first; j < m; ++j) {
      if (gd[j].empty()) gd[j] = norm.apply(d[j]);
    }
    DenseMatrix gram(cols, cols);
    std::vector<double> rhs(cols);
    for (int a = 0; a < cols; ++a) {
      for (int b = a; b < cols; ++b) {
        const double v = dot(d[first + a], gd[first + b]);
        gram(a, b) = v;
        gram(b, a) = v;
      }
      rhs[a] = dot(gd[first + a], latest);
    }

    auto factor = dense_cholesky(gram);
    if (!factor && regularization > 0.0) {
      double trace = 0.0;
      for (int a = 0; a < cols; ++a) trace += gram(a, a);
      const double shift = regularization * trace / cols;
      for (int a = 0; a < cols; ++a) gram(a, a) += shift;
      factor = dense_cholesky(gram);
      sol.regularized = true;
    }
    if (!factor) {
      sol.rank_deficient = true;
      sol.dropped = first + 1;
      continue;
    }
    const auto gamma = cholesky_solve(*factor, rhs);
    for (int a = 0; a < cols; ++a) sol.gamma[first + a] = gamma[a];
    break;
  }

  sol.alpha = alpha_from_gamma(sol.gamma);
  const auto& full_latest = state.latest_residual();
  sol.combined.assign(full_latest.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto& wi = state.residual(i);
    const double a = sol.alpha[i];
    if (a == 0.0) continue;
    for (std::size_t k = 0; k < wi.size(); ++k) sol.combined[k] += a * wi[k];
  }
  sol.combined_norm = norm.norm(state.free_part(sol.combined));
  sol.theta = sol.combined_norm / sol.latest_norm;
  return sol;
}

std::vector<double> aa_step(AAState& state, const AlphaSolution& alpha, const AAConfig& config) {
  config.validate();
  if (state.empty()) throw std::invalid_argument("aa_step: no history");
  const int m = state.size() - 1;
  if (static_cast<int>(alpha.alpha.size()) != m + 1 || static_cast<int>(alpha.gamma.size()) != m) {
    throw std::invalid_argument("aa_step: coefficients do not match the history size");
  }
  const double beta = config.damping;
  const auto& u_k = state.iterate(m);
  const auto& w_latest = state.residual(m);
  const std::size_t len = u_k.size();

  std::vector<double> out, inc;
  if (m == 0 && beta == 1.0) {
    out = state.proposal(m);
    inc = w_latest;
  } else {
    // sum_j alpha_j x_j = x_m - sum_j gamma_j (x_{j+1} - x_j), applied to u and w.
    inc.resize(len);
    for (std::size_t i = 0; i < len; ++i) inc[i] = beta * w_latest[i];
    for (int j = 0; j < m; ++j) {
      const double g = alpha.gamma[j];
      if (g == 0.0) continue;
      const auto& e_next = state.increment(j + 1);
      const auto& w0 = state.residual(j);
      const auto& w1 = state.residual(j + 1);
      for (std::size_t i = 0; i < len; ++i) inc[i] -= g * (e_next[i] + beta * (w1[i] - w0[i]));
    }
    out.resize(len);
    for (std::size_t i = 0; i < len; ++i) out[i] = u_k[i] + inc[i];
  }
  state.last_output_ = out;
  state.last_increment_ = std::move(inc);
  return out;
}

double verify_residual_identity(const AAState& state, const AlphaSolution& alpha) {
  if (state.last_increment().empty()) {
    throw std::logic_error("verify_residual_identity: no update since the last push");
  }
  const int m = state.size() - 1;
  const auto& lhs = alpha.combined;
  std::vector<double> rhs = state.last_increment();
  double tail = 1.0;
  for (int i = 1; i <= m; ++i) {
    tail -= alpha.alpha[m - i + 1];
    const auto& e = state.increment(m - i + 1);
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += tail * e[k];
  }
  double diff = 0.0, ref = 0.0;
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    diff += (lhs[k] - rhs[k]) * (lhs[k] - rhs[k]);
    ref += lhs[k] * lhs[k];
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

}  // namespace aapicard
