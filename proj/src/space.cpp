#include "aapicard/space.hpp"

#include "aapicard/quadrature.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace aapicard {

BoundaryConditions& BoundaryConditions::dirichlet(BoundaryLabel label, VelocityFunction value) {
  entries_.emplace_back(label, VelocityBc{VelocityBc::Kind::dirichlet, std::move(value)});
  return *this;
}

BoundaryConditions& BoundaryConditions::dirichlet(BoundaryLabel label, std::array<double, 2> constant) {
  return dirichlet(label, [constant](double, double) { return constant; });
}

BoundaryConditions& BoundaryConditions::natural(BoundaryLabel label) {
  entries_.emplace_back(label, VelocityBc{VelocityBc::Kind::natural, {}});
  return *this;
}

const VelocityBc* BoundaryConditions::find(BoundaryLabel label) const {
  const VelocityBc* found = nullptr;
  for (const auto& [l, bc] : entries_) {
    if (l == label) found = &bc;
  }
  return found;
}

std::vector<double> TaylorHoodSpace::gather_free(std::span<const double> velocity) const {
  if (velocity.size() != static_cast<std::size_t>(num_velocity_dofs())) {
    throw std::invalid_argument("gather_free: expected a full velocity vector");
  }
  std::vector<double> out(free_dofs_.size());
  for (std::size_t i = 0; i < free_dofs_.size(); ++i) out[i] = velocity[free_dofs_[i]];
  return out;
}

void TaylorHoodSpace::scatter_free(std::span<const double> free_values, std::span<double> velocity) const {
  if (free_values.size() != free_dofs_.size() ||
      velocity.size() != static_cast<std::size_t>(num_velocity_dofs())) {
    throw std::invalid_argument("scatter_free: dimension mismatch");
  }
  for (std::size_t i = 0; i < free_dofs_.size(); ++i) velocity[free_dofs_[i]] = free_values[i];
}

TaylorHoodSpace build_space(const TriMesh& mesh, const BoundaryConditions& bcs) {
  TaylorHoodSpace space(mesh);

  std::set<BoundaryLabel> used_labels;
  for (const auto& edge : mesh.boundary_edges()) used_labels.insert(edge.label);
  for (BoundaryLabel label : used_labels) {
    if (!bcs.find(label)) {
      throw std::invalid_argument("build_space: no boundary condition for label '" +
                                  std::string(to_string(label)) + "'");
    }
  }

  space.nodes_ = mesh.vertices();
  std::map<std::pair<int, int>, int> edge_nodes;
  space.element_nodes_.reserve(mesh.num_triangles());
  for (const auto& tri : mesh.triangles()) {
    std::array<int, 6> nodes{tri[0], tri[1], tri[2], -1, -1, -1};
    for (int e = 0; e < 3; ++e) {
      const int a = tri[kP2LocalEdges[e][0]], b = tri[kP2LocalEdges[e][1]];
      const auto key = a < b ? std::pair{a, b} : std::pair{b, a};
      auto [it, inserted] = edge_nodes.emplace(key, static_cast<int>(space.nodes_.size()));
      if (inserted) {
        const Point& pa = mesh.vertices()[a];
        const Point& pb = mesh.vertices()[b];
        space.nodes_.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
      }
      nodes[3 + e] = it->second;
    }
    space.element_nodes_.push_back(nodes);
  }

  const int nn = space.num_nodes();
  std::vector<char> constrained(nn, 0);
  space.lift_.assign(2 * static_cast<std::size_t>(nn), 0.0);
  bool has_natural = false;

  for (const auto& [label, bc] : bcs.entries()) {
    for (const auto& edge : mesh.boundary_edges()) {
      if (edge.label != label) continue;
      if (bc.kind == VelocityBc::Kind::natural) {
        has_natural = true;
        continue;
      }
      const int a = edge.vertices[0], b = edge.vertices[1];
      const int mid = edge_nodes.at(a < b ? std::pair{a, b} : std::pair{b, a});
      for (int node : {a, b, mid}) {
        const Point& p = space.nodes_[node];
        const auto value = bc.value(p.x, p.y);
        constrained[node] = 1;
        space.lift_[space.velocity_dof(0, node)] = value[0];
        space.lift_[space.velocity_dof(1, node)] = value[1];
      }
    }
  }

  space.free_index_.assign(2 * static_cast<std::size_t>(nn), -1);
  for (int c = 0; c < 2; ++c) {
    for (int node = 0; node < nn; ++node) {
      const int dof = space.velocity_dof(c, node);
      if (constrained[node]) {
        space.dirichlet_dofs_.push_back(dof);
      } else {
        space.free_index_[dof] = static_cast<int>(space.free_dofs_.size());
        space.free_dofs_.push_back(dof);
      }
    }
  }
  space.pinned_pressure_ = has_natural ? -1 : 0;
  return space;
}

BoundaryConditions cavity_conditions() {
  BoundaryConditions bcs;
  bcs.dirichlet(BoundaryLabel::wall, std::array<double, 2>{0.0, 0.0});
  bcs.dirichlet(BoundaryLabel::lid, std::array<double, 2>{1.0, 0.0});
  return bcs;
}

}  // namespace aapicard
