#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "aapicard/manufactured.hpp"
#include "aapicard/picard.hpp"

using namespace aapicard;

namespace {

BoundaryConditions all_walls() {
  BoundaryConditions bcs;
  bcs.dirichlet(BoundaryLabel::wall, std::array<double, 2>{0.0, 0.0});
  bcs.dirichlet(BoundaryLabel::lid, std::array<double, 2>{0.0, 0.0});
  return bcs;
}

double h10(const PicardProblem& p, const std::vector<double>& u) {
  return std::sqrt(std::max(0.0, weighted_inner(p.stiffness(), u, u)));
}

std::vector<double> minus(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

}  // namespace

TEST_CASE("zero data gives the zero solution") {
  PicardProblem p(build_space(unit_square_mesh(4), all_walls()), 1.0);
  const auto u0 = p.initial_guess();
  const auto g = p.apply_g(u0);
  for (double v : g.velocity) CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(picard_stability_check(p, g).grad_norm <= 1e-14);
  CHECK(std::isnan(picard_stability_check(p, g).ratio));
}

TEST_CASE("Stokes limit does not depend on the iterate") {
  const double nu = 0.5;
  const auto sol = stream_function_solution(nu, false);
  PicardProblem p(build_space(unit_square_mesh(6), all_walls()), nu, sol.body_force, false);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto u = p.initial_guess();
  const auto g0 = p.apply_g(u);
  for (int dof : p.space().free_velocity_dofs()) u.velocity[dof] = uni(rng);
  const auto g1 = p.apply_g(u);
  CHECK(h10(p, minus(g0.velocity, g1.velocity)) <= 1e-12 * h10(p, g0.velocity));

  const auto check = picard_stability_check(p, g0);
  CHECK(check.ratio <= 1.0 + 1e-9);
  CHECK(check.ratio > 0.0);
}

TEST_CASE("proposal is discretely divergence free and satisfies the boundary data") {
  PicardProblem p(build_space(barycentric_refine(unit_square_mesh(4)), cavity_conditions()), 0.01);
  const auto u0 = p.initial_guess();
  const auto g = p.apply_g(u0);
  const auto bu = spmv(p.divergence(), g.velocity);
  double worst = 0.0;
  for (double v : bu) worst = std::max(worst, std::abs(v));
  CHECK(worst <= 1e-12);
  const auto& lift = p.space().dirichlet_values();
  for (int dof : p.space().dirichlet_velocity_dofs()) CHECK(g.velocity[dof] == lift[dof]);
}

TEST_CASE("residual vanishes on constrained dofs and for identical fields") {
  PicardProblem p(build_space(unit_square_mesh(4), cavity_conditions()), 0.1);
  const auto u0 = p.initial_guess();
  const auto g = p.apply_g(u0);
  const auto w = residual(p, u0, g);
  for (int dof : p.space().dirichlet_velocity_dofs()) CHECK(w.velocity[dof] == 0.0);
  const auto same = residual(p, g, g);
  for (double v : same.velocity) CHECK(v == 0.0);
}

TEST_CASE("converged iterate is a fixed point") {
  PicardProblem p(build_space(unit_square_mesh(6), cavity_conditions()), 0.05);
  auto u = p.initial_guess();
  for (int k = 0; k < 60; ++k) u = p.apply_g(u);
  const auto again = p.apply_g(u);
  CHECK(h10(p, minus(again.velocity, u.velocity)) <= 1e-9);
}

TEST_CASE("small-data Picard contracts at a steady rate") {
  const double nu = 1.0;
  const auto sol = stream_function_solution(nu);
  PicardProblem p(build_space(unit_square_mesh(8), all_walls()), nu, sol.body_force);
  auto u = p.initial_guess();
  std::vector<double> res;
  for (int k = 0; k < 5; ++k) {
    auto next = p.apply_g(u);
    res.push_back(h10(p, minus(next.velocity, u.velocity)));
    u = std::move(next);
  }
  for (std::size_t k = 1; k < res.size(); ++k) CHECK(res[k] < res[k - 1]);
}

TEST_CASE("norm set on free dofs") {
  PicardProblem p(build_space(unit_square_mesh(4), cavity_conditions()), 0.1);
  const auto norms = p.norms();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> w(p.space().num_free_velocity_dofs());
  for (auto& v : w) v = uni(rng);
  CHECK(norms.h10.norm(w) == doctest::Approx(std::sqrt(weighted_inner(p.free_stiffness(), w, w))));
  CHECK(norms.l2.norm(w) == doctest::Approx(std::sqrt(weighted_inner(p.free_mass(), w, w))));
  CHECK(norms.ell2.norm(w) == doctest::Approx(norm2(w)));
  const auto sw = sparse_spd_solve(p.free_stiffness(), w);
  CHECK(norms.h_minus_1.norm(w) == doctest::Approx(std::sqrt(dot(w, sw))));
  // Poincare on the unit square.
  CHECK(norms.l2.norm(w) < norms.h10.norm(w));
  CHECK(norms.lumped_l2.norm(w) > 0.0);
}
