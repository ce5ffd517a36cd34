#include "aapicard/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "aapicard/manufactured.hpp"
#include "aapicard/mesh.hpp"

namespace aapicard {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::cavity: return "cavity";
    case ProblemKind::channel: return "channel";
    case ProblemKind::manufactured: return "manufactured";
  }
  return "unknown";
}

std::optional<ProblemKind> parse_problem_kind(std::string_view text) {
  for (auto k : {ProblemKind::cavity, ProblemKind::channel, ProblemKind::manufactured}) {
    if (to_string(k) == text) return k;
  }
  if (text == "imported-mesh-channel") return ProblemKind::channel;
  return std::nullopt;
}

void RunConfig::validate() const {
  if (!(re > 0.0)) throw std::invalid_argument("Re must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max iterations must be at least 1");
  if (problem == ProblemKind::channel && mesh_path.empty()) {
    throw std::invalid_argument("the channel problem needs a mesh file");
  }
  if (problem != ProblemKind::channel && n < 2) throw std::invalid_argument("n must be at least 2");
  AAConfig{depth, damping}.validate();
}

std::map<std::string, std::string> RunConfig::snapshot() const {
  std::map<std::string, std::string> s;
  s["problem"] = std::string(to_string(problem));
  s["re"] = fmt17(re);
  if (problem == ProblemKind::channel) {
    s["mesh"] = mesh_path;
  } else {
    s["n"] = std::to_string(n);
  }
  s["barycentric"] = barycentric ? "true" : "false";
  s["element"] = "taylor-hood-p2p1";
  s["m"] = std::to_string(depth);
  s["beta"] = fmt17(damping);
  s["norm"] = std::string(to_string(norm));
  s["max_iters"] = std::to_string(max_iterations);
  s["tol"] = fmt17(tolerance);
  s["fast"] = fast ? "true" : "false";
  return s;
}

PicardProblem make_problem(const RunConfig& config) {
  config.validate();
  const double nu = 1.0 / config.re;
  switch (config.problem) {
    case ProblemKind::cavity: {
      auto mesh = unit_square_mesh(config.n);
      if (config.barycentric) mesh = barycentric_refine(mesh);
      return PicardProblem(build_space(mesh, cavity_conditions()), nu);
    }
    case ProblemKind::manufactured: {
      auto mesh = unit_square_mesh(config.n);
      if (config.barycentric) mesh = barycentric_refine(mesh);
      BoundaryConditions bcs;
      bcs.dirichlet(BoundaryLabel::wall, std::array<double, 2>{0.0, 0.0});
      bcs.dirichlet(BoundaryLabel::lid, std::array<double, 2>{0.0, 0.0});
      auto solution = stream_function_solution(nu);
      return PicardProblem(build_space(mesh, bcs), nu, solution.body_force);
    }
    case ProblemKind::channel: {
      auto mesh = import_mesh(config.mesh_path);
      if (config.barycentric) mesh = barycentric_refine(mesh);
      double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
      for (const auto& e : mesh.boundary_edges()) {
        if (e.label != BoundaryLabel::inflow) continue;
        for (int v : e.vertices) {
          ymin = std::min(ymin, mesh.vertices()[v].y);
          ymax = std::max(ymax, mesh.vertices()[v].y);
        }
      }
      if (!(ymax > ymin)) throw std::invalid_argument("channel mesh has no inflow boundary");
      const double height = ymax - ymin;
      // Parabolic profile with unit mean velocity.
      auto inflow = [ymin, height](double, double y) -> std::array<double, 2> {
        const double s = y - ymin;
        return {6.0 * s * (height - s) / (height * height), 0.0};
      };
      BoundaryConditions bcs;
      bcs.natural(BoundaryLabel::outflow);
      bcs.dirichlet(BoundaryLabel::inflow, inflow);
      bcs.dirichlet(BoundaryLabel::wall, std::array<double, 2>{0.0, 0.0});
      bcs.dirichlet(BoundaryLabel::cylinder, std::array<double, 2>{0.0, 0.0});
      return PicardProblem(build_space(mesh, bcs), nu);
    }
  }
  throw std::logic_error("unknown problem kind");
}

RunReport run(PicardProblem& problem, const RunConfig& config, const StepObserver& observer) {
  config.validate();
  const AAConfig aa{config.depth, config.damping};
  const TaylorHoodSpace& space = problem.space();
  const NormSet norms = problem.norms();
  const NormOperator& driving_norm = norms.get(config.norm);

  RunReport report;
  report.config = config.snapshot();
  report.outcome = Outcome::max_iterations;

  DiscreteField u = problem.initial_guess();
  AAState state(config.depth, space.free_velocity_dofs());
  double initial_residual = kNaN;

  for (int k = 1; k <= config.max_iterations; ++k) {
    const auto start = std::chrono::steady_clock::now();

    DiscreteField proposal;
    try {
      proposal = problem.apply_g(u);
    } catch (const SolverError& e) {
      report.outcome = Outcome::solver_failure;
      report.message = e.what();
      break;
    }
    DiscreteField w = residual(problem, u, proposal);
    const auto w_free = space.gather_free(w.velocity);

    IterationRecord rec;
    rec.k = k;
    rec.res_l2 = norms.ell2.norm(w_free);
    rec.res_L2 = norms.l2.norm(w_free);
    rec.res_lumped_L2 = norms.lumped_l2.norm(w_free);
    rec.res_H10 = norms.h10.norm(w_free);
    rec.res_Hm1 = norms.h_minus_1.norm(w_free);
    rec.grad_norm_proposal = std::sqrt(std::max(0.0, weighted_inner(problem.stiffness(), proposal.velocity, proposal.velocity)));
    if (k == 1) initial_residual = rec.res_H10;

    state.push(u.velocity, proposal.velocity, std::move(w.velocity));

    AlphaSolution driving = solve_alpha(state, driving_norm, aa.regularization);
    std::optional<DualGains> gains;
    if (!config.fast) {
      gains.emplace();
      gains->h10 = config.norm == NormKind::h10 ? driving : solve_alpha(state, norms.h10, aa.regularization);
      gains->l2 = config.norm == NormKind::l2 ? driving : solve_alpha(state, norms.l2, aa.regularization);
      rec.theta_H10 = gains->h10.theta;
      rec.theta_L2 = gains->l2.theta;
      rec.alpha = gains->h10.alpha;
      rec.alphahat = gains->l2.alpha;
      rec.cross = first_order_factors(state, *gains, norms.h10, norms.l2);
      rec.factor_H10 = rec.cross.factor_h10;
      rec.factor_L2 = rec.cross.factor_l2;
    } else {
      rec.theta_H10 = config.norm == NormKind::h10 ? driving.theta : kNaN;
      rec.theta_L2 = config.norm == NormKind::l2 ? driving.theta : kNaN;
      if (config.norm == NormKind::h10) rec.alpha = driving.alpha;
      if (config.norm == NormKind::l2) rec.alphahat = driving.alpha;
      rec.factor_H10 = rec.factor_L2 = kNaN;
    }
    rec.ratio_L2_H10 = rec.res_H10 > 0.0 ? rec.res_L2 / rec.res_H10 : kNaN;
    rec.theta_driving = driving.theta;
    rec.alpha_driving = driving.alpha;
    rec.rank_deficient = driving.rank_deficient;

    bool stop = false;
    if (rec.res_H10 < config.tolerance) {
      report.outcome = Outcome::converged;
      stop = true;
    } else if (!std::isfinite(rec.res_H10) || rec.res_H10 > config.divergence_factor * initial_residual) {
      report.outcome = Outcome::diverged;
      stop = true;
    }

    if (stop) {
      rec.identity_residual = kNaN;
      rec.step_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report.records.push_back(std::move(rec));
      if (observer) observer({report.records.back(), state, driving, gains ? &*gains : nullptr, norms, problem, false});
      u = std::move(proposal);
      break;
    }

    std::vector<double> next = aa_step(state, driving, aa);
    rec.identity_residual = verify_residual_identity(state, driving);
    rec.step_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.records.push_back(std::move(rec));
    if (observer) observer({report.records.back(), state, driving, gains ? &*gains : nullptr, norms, problem, true});
    u.velocity = std::move(next);
    u.pressure = std::move(proposal.pressure);
  }

  report.iterations = static_cast<int>(report.records.size());
  report.final_residual = report.records.empty() ? kNaN : report.records.back().res_H10;
  return report;
}

RunReport run(const RunConfig& config, const StepObserver& observer) {
  PicardProblem problem = make_problem(config);
  return run(problem, config, observer);
}

NormComparison compare_norms(const RunConfig& base) {
  NormComparison out;
  PicardProblem problem = make_problem(base);
  for (NormKind kind : kAllNorms) {
    RunConfig cfg = base;
    cfg.norm = kind;
    out.runs.emplace_back(kind, run(problem, cfg));
  }
  return out;
}

std::string comparison_table(const NormComparison& comparison) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %-15s %10s %24s\n", "norm", "outcome", "iterations", "final_res_H10");
  os << line;
  for (const auto& [kind, report] : comparison.runs) {
    const std::string outcome = report.outcome == Outcome::converged
                                    ? std::string(to_string(report.outcome))
                                    : "FAILED:" + std::string(to_string(report.outcome));
    std::snprintf(line, sizeof line, "%-10s %-15s %10d %24.17g\n", std::string(to_string(kind)).c_str(),
                  outcome.c_str(), report.iterations, report.final_residual);
    os << line;
  }
  return os.str();
}

}  // namespace aapicard
