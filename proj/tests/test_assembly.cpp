#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "aapicard/assembly.hpp"
#include "aapicard/manufactured.hpp"

using namespace aapicard;

namespace {

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = uni(rng);
  return v;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

BoundaryConditions all_walls() {
  BoundaryConditions bcs;
  bcs.dirichlet(BoundaryLabel::wall, std::array<double, 2>{0.0, 0.0});
  bcs.dirichlet(BoundaryLabel::lid, std::array<double, 2>{0.0, 0.0});
  return bcs;
}

}  // namespace

TEST_CASE("dof counts") {
  const auto space = build_space(unit_square_mesh(2), cavity_conditions());
  CHECK(space.num_velocity_dofs() == 50);
  CHECK(space.num_pressure_dofs() == 9);
  // Interior P2 nodes: 1 vertex + 8 edge midpoints off the boundary.
  const auto walls = build_space(unit_square_mesh(2), all_walls());
  CHECK(walls.num_free_velocity_dofs() == 2 * 9);
}

TEST_CASE("lid nodes carry the lid velocity") {
  const auto space = build_space(unit_square_mesh(4), cavity_conditions());
  const auto& lift = space.dirichlet_values();
  int top = 0;
  for (int node = 0; node < space.num_nodes(); ++node) {
    if (space.nodes()[node].y != 1.0) continue;
    ++top;
    CHECK(space.is_constrained(space.velocity_dof(0, node)));
    CHECK(lift[space.velocity_dof(0, node)] == 1.0);
    CHECK(lift[space.velocity_dof(1, node)] == 0.0);
  }
  CHECK(top == 9);
}

TEST_CASE("unmapped boundary label is rejected") {
  BoundaryConditions bcs;
  bcs.dirichlet(BoundaryLabel::wall, std::array<double, 2>{0.0, 0.0});
  CHECK_THROWS(build_space(unit_square_mesh(2), bcs));
}

TEST_CASE("stiffness") {
  const auto space = build_space(barycentric_refine(unit_square_mesh(3)), cavity_conditions());
  const auto k = assemble_stiffness(space);
  CHECK(std::abs(weighted_inner(k, ones(k.rows()), ones(k.rows()))) <= 1e-12);
  const auto u = interpolate_velocity(space, [](double x, double) { return std::array<double, 2>{x, 0.0}; });
  CHECK(weighted_inner(k, u, u) == doctest::Approx(1.0).epsilon(1e-13));

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto z = random_vector(rng, k.rows());
    CHECK(weighted_inner(k, z, z) >= -1e-12);
  }
}

TEST_CASE("mass and lumping") {
  const auto space = build_space(unit_square_mesh(3), cavity_conditions());
  const auto m = assemble_mass(space);
  CHECK(weighted_inner(m, ones(m.rows()), ones(m.rows())) == doctest::Approx(2.0).epsilon(1e-13));
  const auto u = interpolate_velocity(space, [](double x, double y) { return std::array<double, 2>{x, y}; });
  CHECK(weighted_inner(m, u, u) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));

  const auto lumped = lump_mass(m);
  CHECK(std::accumulate(lumped.begin(), lumped.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-12));
  for (double d : lumped) CHECK(d > 0.0);
}

TEST_CASE("convection") {
  const auto space = build_space(barycentric_refine(unit_square_mesh(4)), cavity_conditions());
  const std::vector<double> zero(space.num_velocity_dofs(), 0.0);
  CHECK(assemble_convection(space, zero).max_abs() == 0.0);

  const auto a = interpolate_velocity(space, [](double, double) { return std::array<double, 2>{1.0, 0.0}; });
  const auto w = interpolate_velocity(space, [](double, double y) { return std::array<double, 2>{y, 0.0}; });
  const auto n = assemble_convection(space, a);
  CHECK(std::abs(weighted_inner(n, w, w)) <= 1e-14);
  // Constant advection of a constant field vanishes row by row.
  CHECK(max_abs(spmv(n, ones(n.rows()))) <= 1e-14);
}

TEST_CASE("convection is skew on fields vanishing on the boundary") {
  const auto space = build_space(barycentric_refine(unit_square_mesh(5)), cavity_conditions());
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_vector(rng, space.num_velocity_dofs());
    std::vector<double> z(space.num_velocity_dofs(), 0.0);
    space.scatter_free(random_vector(rng, space.num_free_velocity_dofs()), z);
    const auto n = assemble_convection(space, a);
    const double zz = std::inner_product(z.begin(), z.end(), z.begin(), 0.0);
    CHECK(std::abs(weighted_inner(n, z, z)) <= 1e-12 * n.norm_inf() * zz);
  }
}

TEST_CASE("divergence") {
  const auto space = build_space(unit_square_mesh(3), cavity_conditions());
  const auto b = assemble_divergence(space);
  CHECK(b.rows() == space.num_pressure_dofs());
  CHECK(b.cols() == space.num_velocity_dofs());

  const auto c = interpolate_velocity(space, [](double, double) { return std::array<double, 2>{0.3, -2.0}; });
  CHECK(max_abs(spmv(b, c)) <= 1e-14);
  const auto solenoidal = interpolate_velocity(space, [](double x, double y) { return std::array<double, 2>{x, -y}; });
  CHECK(max_abs(spmv(b, solenoidal)) <= 1e-14);
  const auto u = interpolate_velocity(space, [](double x, double) { return std::array<double, 2>{x, 0.0}; });
  const auto bu = spmv(b, u);
  CHECK(std::accumulate(bu.begin(), bu.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("load vector integrates the body force") {
  const auto space = build_space(unit_square_mesh(4), cavity_conditions());
  Assembler assembler(space);
  const auto f = assembler.load([](double, double) { return std::array<double, 2>{1.0, 2.0}; });
  double s0 = 0.0, s1 = 0.0;
  for (int node = 0; node < space.num_nodes(); ++node) {
    s0 += f[space.velocity_dof(0, node)];
    s1 += f[space.velocity_dof(1, node)];
  }
  CHECK(s0 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(s1 == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("parallel and serial assembly agree bitwise") {
  auto space = std::make_shared<const TaylorHoodSpace>(
      build_space(barycentric_refine(unit_square_mesh(7)), cavity_conditions()));
  Assembler assembler(space);
  std::mt19937_64 rng(77);
  const auto a = random_vector(rng, space->num_velocity_dofs());
  auto same = [](const CsrMatrix& x, const CsrMatrix& y) { return x.same_pattern(y) && x.values() == y.values(); };
  CHECK(same(assembler.scalar_stiffness(Execution::parallel), assembler.scalar_stiffness(Execution::serial)));
  CHECK(same(assembler.scalar_mass(Execution::parallel), assembler.scalar_mass(Execution::serial)));
  CHECK(same(assembler.scalar_convection(a, Execution::parallel), assembler.scalar_convection(a, Execution::serial)));
  CHECK(same(assembler.divergence(Execution::parallel), assembler.divergence(Execution::serial)));
}

TEST_CASE("manufactured error of interpolants") {
  const auto space = build_space(unit_square_mesh(4), cavity_conditions());
  const ExactVelocity quad{[](double x, double y) { return std::array<double, 2>{x * y, x * x - y * y}; },
                           [](double x, double y) { return std::array<double, 4>{y, x, 2 * x, -2 * y}; }};
  const auto uh = interpolate_velocity(space, quad.value);
  const auto e = manufactured_error(space, quad, uh);
  CHECK(e.l2 <= 1e-12);
  CHECK(e.h1 <= 1e-12);

  const ExactVelocity unit{[](double, double) { return std::array<double, 2>{1.0, 0.0}; },
                           [](double, double) { return std::array<double, 4>{0, 0, 0, 0}; }};
  const std::vector<double> zero(space.num_velocity_dofs(), 0.0);
  CHECK(manufactured_error(space, unit, zero).l2 == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("manufactured velocity is divergence free") {
  const auto sol = stream_function_solution(0.1);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double x = uni(rng), y = uni(rng);
    const auto j = sol.velocity.jacobian(x, y);
    CHECK(std::abs(j[0] + j[3]) <= 1e-15);
  }
  const auto wall = sol.velocity.value(0.0, 0.37);
  CHECK(wall[0] == 0.0);
  CHECK(wall[1] == 0.0);
}
