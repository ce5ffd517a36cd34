#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aapicard {

enum class BoundaryLabel { wall, lid, inflow, outflow, cylinder };

std::string_view to_string(BoundaryLabel label);
BoundaryLabel parse_boundary_label(std::string_view text);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct BoundaryEdge {
  std::array<int, 2> vertices;
  BoundaryLabel label;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conforming triangulation of a 2D domain. Triangles are counterclockwise and
// every topological boundary edge carries a label. Instances are validated on
// construction and immutable afterwards.
class TriMesh {
 public:
  TriMesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
          std::vector<BoundaryEdge> boundary_edges);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  double signed_area(std::size_t t) const;
  double total_area() const;
  // Largest triangle diameter.
  double h() const;
  // Number of distinct (undirected) edges.
  std::size_t num_edges() const;

 private:
  void validate() const;

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_;
};

// Structured n x n mesh of the unit square; cells split along the lower-left to
// upper-right diagonal. Top edge (corners included) gets `lid_label`, the rest
// of the boundary is `wall`.
TriMesh unit_square_mesh(int n, BoundaryLabel lid_label = BoundaryLabel::lid);

// Splits every triangle into three by inserting its barycenter.
TriMesh barycentric_refine(const TriMesh& mesh);

TriMesh read_mesh(std::istream& in);
TriMesh import_mesh(const std::filesystem::path& path);
void write_mesh(const TriMesh& mesh, std::ostream& out);

}  // namespace aapicard
