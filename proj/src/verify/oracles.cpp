#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "aapicard/manufactured.hpp"
#include "aapicard/verify.hpp"

namespace aapicard::verify {

namespace {

double plain_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}


}  // namespace

GridSearch grid_search_alpha(const std::vector<std::vector<double>>& residuals, const NormOperator& norm,
                             double step, double bound) {
  if (residuals.size() < 2 || residuals.size() > 3) {
    throw std::invalid_argument("grid_search_alpha: only m = 1 and m = 2 are supported");
  }
  const int m = static_cast<int>(residuals.size()) - 1;
  const auto& last = residuals[m];
  std::vector<std::vector<double>> d(m), gd(m);
  for (int i = 0; i < m; ++i) {
    d[i].resize(last.size());
    for (std::size_t k = 0; k < last.size(); ++k) d[i][k] = residuals[i][k] - last[k];
    gd[i] = norm.apply(d[i]);
  }
  const auto glast = norm.apply(last);

  // f(x) = c + 2 b^T x + x^T A x
  const double c = plain_dot(last, glast);
  double b[2] = {0, 0}, a[2][2] = {{0, 0}, {0, 0}};
  for (int i = 0; i < m; ++i) {
    b[i] = plain_dot(d[i], glast);
    for (int j = 0; j < m; ++j) a[i][j] = plain_dot(d[i], gd[j]);
  }

  const int count = static_cast<int>(std::lround(2.0 * bound / step)) + 1;
  GridSearch out;
  out.scale_sq = c;
  out.best_sq = std::numeric_limits<double>::infinity();
  out.best_x.assign(m, 0.0);
  if (m == 1) {
    for (int i = 0; i < count; ++i) {
      const double x = -bound + i * step;
      const double f = c + 2.0 * b[0] * x + a[0][0] * x * x;
      if (f < out.best_sq) {
        out.best_sq = f;
        out.best_x = {x};
      }
    }
  } else {
    for (int i = 0; i < count; ++i) {
      const double x0 = -bound + i * step;
      const double base = c + 2.0 * b[0] * x0 + a[0][0] * x0 * x0;
      const double lin = 2.0 * (b[1] + a[0][1] * x0);
      for (int j = 0; j < count; ++j) {
        const double x1 = -bound + j * step;
        const double f = base + x1 * (lin + a[1][1] * x1);
        if (f < out.best_sq) {
          out.best_sq = f;
          out.best_x = {x0, x1};
        }
      }
    }
  }
  // Nearest grid point is within step/2 per coordinate of an interior minimizer.
  double trace = 0.0;
  for (int i = 0; i < m; ++i) trace += a[i][i];
  out.resolution_sq = trace * m * step * step / 4.0;
  return out;
}

std::vector<double> hand_rolled_picard(PicardProblem& problem, int steps) {
  const auto& space = problem.space();
  const auto& k_ff = problem.free_stiffness();
  DiscreteField u = problem.initial_guess();
  std::vector<double> history;
  for (int k = 0; k < steps; ++k) {
    DiscreteField next = problem.apply_g(u);
    std::vector<double> w(next.velocity.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = next.velocity[i] - u.velocity[i];
    const auto wf = space.gather_free(w);
    // Serial row-by-row w^T K w.
    double s = 0.0;
    for (int r = 0; r < k_ff.rows(); ++r) {
      double row = 0.0;
      for (int p = k_ff.row_ptr()[r]; p < k_ff.row_ptr()[r + 1]; ++p) row += k_ff.values()[p] * wf[k_ff.col_idx()[p]];
      s += wf[r] * row;
    }
    history.push_back(std::sqrt(std::max(0.0, s)));
    u = std::move(next);
  }
  return history;
}

IdentityOracle synthetic_identity(std::uint64_t seed, int depth, int dim, int steps) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto random_vector = [&] {
    std::vector<double> v(dim);
    for (auto& x : v) x = uni(rng);
    return v;
  };

  // g(u) = 0.5 R u / sqrt(dim) + c + 0.3 sin(u): a mildly nonlinear contraction,
  // so the residuals do not collapse onto a Krylov space within a few steps.
  std::vector<std::vector<double>> r(dim);
  for (auto& row : r) row = random_vector();
  const auto shift = random_vector();
  auto g = [&](const std::vector<double>& u) {
    std::vector<double> out(dim);
    for (int i = 0; i < dim; ++i) out[i] = 0.5 * plain_dot(r[i], u) / std::sqrt(double(dim)) + shift[i] + 0.3 * std::sin(u[i]);
    return out;
  };

  const AAConfig config{depth, 1.0};
  const auto norm = NormOperator::identity(dim);
  AAState state(depth, {});
  std::vector<std::vector<double>> us, uts;  // every iterate and proposal
  std::vector<double> u = random_vector();
  IdentityOracle out;
  for (int k = 0; k < steps; ++k) {
    const auto ut = g(u);
    std::vector<double> w(dim);
    for (int i = 0; i < dim; ++i) w[i] = ut[i] - u[i];
    us.push_back(u);
    uts.push_back(ut);
    state.push(u, ut, w);
    const auto alpha = solve_alpha(state, norm);
    const auto next = aa_step(state, alpha, config);

    // Oracle sums in long double; inputs are the exact doubles the library saw.
    const int mk = state.size() - 1;
    const int first = static_cast<int>(us.size()) - 1 - mk;
    std::vector<long double> direct(dim, 0.0L), combined(dim, 0.0L), mixed(dim, 0.0L);
    for (int j = 0; j <= mk; ++j) {
      const long double a = alpha.alpha[j];
      const auto& uj = us[first + j];
      const auto& utj = uts[first + j];
      const auto& wj = state.residual(j);
      for (int i = 0; i < dim; ++i) {
        direct[i] += a * utj[i];
        combined[i] += a * wj[i];
        mixed[i] += a * uj[i];
      }
    }
    long double diff = 0, ident = 0, dn = 0, cn = 0;
    for (int i = 0; i < dim; ++i) {
      diff += (next[i] - direct[i]) * (next[i] - direct[i]);
      const long double id = combined[i] - (next[i] - mixed[i]);
      ident += id * id;
      dn += direct[i] * direct[i];
      cn += combined[i] * combined[i];
    }
    out.max_update_mismatch = std::max(out.max_update_mismatch, double(std::sqrt(diff / dn)));
    out.max_direct_identity = std::max(out.max_direct_identity, double(std::sqrt(ident / cn)));
    out.max_library_identity = std::max(out.max_library_identity, verify_residual_identity(state, alpha));
    u = next;
  }
  return out;
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ManufacturedRates manufactured_rates(const std::vector<int>& ns, double re) {
  ManufacturedRates out;
  std::vector<double> h;
  const auto exact = stream_function_solution(1.0 / re);
  for (int n : ns) {
    RunConfig cfg;
    cfg.problem = ProblemKind::manufactured;
    cfg.re = re;
    cfg.n = n;
    cfg.depth = 2;
    cfg.tolerance = 1e-11;
    cfg.max_iterations = 100;
    cfg.fast = true;
    PicardProblem problem = make_problem(cfg);
    std::vector<double> uh;
    const RunReport report = run(problem, cfg, [&](const StepView& v) {
      if (!v.updated) uh = v.state.proposal(v.state.size() - 1);
    });
    if (report.outcome != Outcome::converged) {
      throw std::runtime_error("manufactured run did not converge at n = " + std::to_string(n));
    }
    const auto e = manufactured_error(problem.space(), exact.velocity, uh);
    out.n.push_back(n);
    out.l2.push_back(e.l2);
    out.h1.push_back(e.h1);
    h.push_back(1.0 / n);
  }
  out.l2_order = fitted_order(h, out.l2);
  out.h1_order = fitted_order(h, out.h1);
  return out;
}

}  // namespace aapicard::verify
