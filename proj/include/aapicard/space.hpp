#pragma once

#include <array>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "aapicard/mesh.hpp"

namespace aapicard {

using VelocityFunction = std::function<std::array<double, 2>(double x, double y)>;

struct VelocityBc {
  enum class Kind { dirichlet, natural };
  Kind kind = Kind::dirichlet;
  VelocityFunction value;
};

// Boundary data per label. A node shared by several Dirichlet labels takes the
// value of the label added last; Dirichlet always wins over natural.
class BoundaryConditions {
 public:
  BoundaryConditions& dirichlet(BoundaryLabel label, VelocityFunction value);
  BoundaryConditions& dirichlet(BoundaryLabel label, std::array<double, 2> constant);
  BoundaryConditions& natural(BoundaryLabel label);

  const std::vector<std::pair<BoundaryLabel, VelocityBc>>& entries() const { return entries_; }
  const VelocityBc* find(BoundaryLabel label) const;

 private:
  std::vector<std::pair<BoundaryLabel, VelocityBc>> entries_;
};

// Velocity and (optionally) pressure coefficients.
struct DiscreteField {
  std::vector<double> velocity;
  std::vector<double> pressure;
};

// Taylor-Hood P2/P1 dof maps. Velocity dofs are blocked by component:
// dof = component * num_nodes() + node, nodes are the mesh vertices followed by
// one midpoint per edge. Pressure dofs are the mesh vertices.
class TaylorHoodSpace {
 public:
  const TriMesh& mesh() const { return mesh_; }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_velocity_dofs() const { return 2 * num_nodes(); }
  int num_pressure_dofs() const { return static_cast<int>(mesh_.num_vertices()); }
  int velocity_dof(int component, int node) const { return component * num_nodes() + node; }

  const std::vector<Point>& nodes() const { return nodes_; }
  // Six P2 nodes per triangle in local order (vertices, then edges 01, 12, 20).
  const std::vector<std::array<int, 6>>& element_nodes() const { return element_nodes_; }

  // Sorted; component 0 block first.
  const std::vector<int>& free_velocity_dofs() const { return free_dofs_; }
  const std::vector<int>& dirichlet_velocity_dofs() const { return dirichlet_dofs_; }
  // Full-length velocity vector: boundary values on constrained dofs, zero elsewhere.
  const std::vector<double>& dirichlet_values() const { return lift_; }
  // Velocity dof -> position in the free list, or -1.
  const std::vector<int>& free_index() const { return free_index_; }
  int num_free_velocity_dofs() const { return static_cast<int>(free_dofs_.size()); }
  bool is_constrained(int dof) const { return free_index_[dof] < 0; }

  // -1 when a natural (do-nothing) boundary fixes the pressure level.
  int pinned_pressure_dof() const { return pinned_pressure_; }

  std::vector<double> gather_free(std::span<const double> velocity) const;
  void scatter_free(std::span<const double> free_values, std::span<double> velocity) const;

 private:
  friend TaylorHoodSpace build_space(const TriMesh& mesh, const BoundaryConditions& bcs);
  explicit TaylorHoodSpace(TriMesh mesh) : mesh_(std::move(mesh)) {}

  TriMesh mesh_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 6>> element_nodes_;
  std::vector<int> free_dofs_;
  std::vector<int> dirichlet_dofs_;
  std::vector<int> free_index_;
  std::vector<double> lift_;
  int pinned_pressure_ = -1;
};

TaylorHoodSpace build_space(const TriMesh& mesh, const BoundaryConditions& bcs);

// Lid-driven cavity data: lid velocity (1,0), no-slip elsewhere.
BoundaryConditions cavity_conditions();

}  // namespace aapicard
