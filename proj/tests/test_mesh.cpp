#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "aapicard/mesh.hpp"

using namespace aapicard;

namespace {

std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    read_mesh(in);
  } catch (const MeshError& e) {
    return e.what();
  }
  return "";
}

// Vertices as a set of coordinate pairs, to compare meshes up to vertex order.
std::set<std::pair<double, double>> vertex_set(const TriMesh& m) {
  std::set<std::pair<double, double>> s;
  for (const auto& p : m.vertices()) s.insert({p.x, p.y});
  return s;
}

}  // namespace

TEST_CASE("unit square counts") {
  const auto m = unit_square_mesh(2);
  CHECK(m.num_vertices() == 9);
  CHECK(m.num_triangles() == 8);
  CHECK(m.boundary_edges().size() == 8);
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(unit_square_mesh(1), std::invalid_argument);
}

TEST_CASE("unit square areas and diameter") {
  const auto m = unit_square_mesh(3);
  REQUIRE(m.num_triangles() == 18);
  for (std::size_t t = 0; t < m.num_triangles(); ++t) CHECK(m.signed_area(t) == doctest::Approx(1.0 / 18));
  CHECK(unit_square_mesh(64).h() == doctest::Approx(std::sqrt(2.0) / 64).epsilon(1e-14));
}

TEST_CASE("lid label covers the top edge only") {
  const auto m = unit_square_mesh(4);
  int lid = 0;
  for (const auto& e : m.boundary_edges()) {
    if (e.label != BoundaryLabel::lid) continue;
    ++lid;
    CHECK(m.vertices()[e.vertices[0]].y == 1.0);
    CHECK(m.vertices()[e.vertices[1]].y == 1.0);
  }
  CHECK(lid == 4);
}

TEST_CASE("barycentric refinement") {
  const auto coarse = unit_square_mesh(2);
  const auto fine = barycentric_refine(coarse);
  CHECK(fine.num_triangles() == 24);
  CHECK(fine.num_vertices() == 17);
  CHECK(fine.boundary_edges().size() == coarse.boundary_edges().size());

  const TriMesh ref({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}},
                    {{{0, 1}, BoundaryLabel::wall}, {{1, 2}, BoundaryLabel::wall}, {{2, 0}, BoundaryLabel::wall}});
  const auto split = barycentric_refine(ref);
  REQUIRE(split.num_triangles() == 3);
  for (std::size_t t = 0; t < 3; ++t) CHECK(split.signed_area(t) == doctest::Approx(1.0 / 6).epsilon(1e-15));
}

TEST_CASE("refinement preserves area and Euler characteristic") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> pick(2, 9);
  for (int trial = 0; trial < 12; ++trial) {
    const auto coarse = unit_square_mesh(pick(rng));
    const auto fine = barycentric_refine(trial % 2 ? barycentric_refine(coarse) : coarse);
    CHECK(std::abs(fine.total_area() - 1.0) <= 1e-14);
    const long v = fine.num_vertices(), e = fine.num_edges(), f = fine.num_triangles();
    CHECK(v - e + f == 1);
    for (std::size_t t = 0; t < fine.num_triangles(); ++t) CHECK(fine.signed_area(t) > 0.0);
  }
}

TEST_CASE("read mesh file") {
  const std::string text =
      "trimesh 1\n"
      "# the 2x2 unit square\n"
      "vertices 9\n"
      "0 0\n0.5 0\n1 0\n0 0.5\n0.5 0.5\n1 0.5\n0 1\n0.5 1\n1 1\n"
      "triangles 8\n"
      "0 1 4\n0 4 3\n1 2 5\n1 5 4\n3 4 7\n3 7 6\n4 5 8\n4 8 7\n"
      "boundary 8\n"
      "0 1 wall\n1 2 wall\n2 5 wall\n5 8 wall\n8 7 lid  # top\n7 6 lid\n6 3 wall\n3 0 wall\n";
  std::istringstream in(text);
  const auto m = read_mesh(in);
  const auto ref = unit_square_mesh(2);
  CHECK(m.num_triangles() == ref.num_triangles());
  CHECK(vertex_set(m) == vertex_set(ref));
  CHECK(m.total_area() == doctest::Approx(1.0));
}

TEST_CASE("write and read back") {
  const auto m = barycentric_refine(unit_square_mesh(3));
  std::stringstream io;
  write_mesh(m, io);
  const auto back = read_mesh(io);
  REQUIRE(back.num_vertices() == m.num_vertices());
  for (std::size_t i = 0; i < m.num_vertices(); ++i) {
    CHECK(back.vertices()[i].x == m.vertices()[i].x);
    CHECK(back.vertices()[i].y == m.vertices()[i].y);
  }
  CHECK(back.triangles() == m.triangles());
  CHECK(back.boundary_edges().size() == m.boundary_edges().size());
}

TEST_CASE("mesh validation errors") {
  const std::string head = "trimesh 1\nvertices 4\n0 0\n1 0\n1 1\n0 1\n";
  const std::string bnd = "boundary 4\n0 1 wall\n1 2 wall\n2 3 lid\n3 0 wall\n";

  SUBCASE("clockwise triangle names its index") {
    const auto msg = error_of(head + "triangles 2\n0 1 2\n0 3 2\n" + bnd);
    CHECK(msg.find("triangle 1") != std::string::npos);
  }
  SUBCASE("unlabeled boundary edge") {
    const auto msg = error_of(head + "triangles 2\n0 1 2\n0 2 3\nboundary 3\n0 1 wall\n1 2 wall\n2 3 lid\n");
    CHECK(msg.find("label") != std::string::npos);
  }
  SUBCASE("labeled interior edge") {
    CHECK_FALSE(error_of(head + "triangles 2\n0 1 2\n0 2 3\nboundary 5\n0 1 wall\n1 2 wall\n2 3 lid\n3 0 wall\n0 2 wall\n")
                    .empty());
  }
  SUBCASE("vertex index out of range") {
    CHECK_FALSE(error_of(head + "triangles 2\n0 1 2\n0 2 7\n" + bnd).empty());
  }
  SUBCASE("unknown label") {
    CHECK_FALSE(error_of(head + "triangles 2\n0 1 2\n0 2 3\nboundary 4\n0 1 wall\n1 2 wall\n2 3 roof\n3 0 wall\n").empty());
  }
  SUBCASE("bad header reports the line") {
    const auto msg = error_of("# comment\ntrimesh 2\n");
    CHECK(msg.find("line 2") != std::string::npos);
  }
}
