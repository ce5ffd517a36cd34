#include "aapicard/assembly.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace aapicard {

ElementPattern::ElementPattern(int rows, int cols, int local_rows, int local_cols,
                               std::span<const int> row_dofs, std::span<const int> col_dofs)
    : local_rows_(local_rows), local_cols_(local_cols) {
  if (local_rows <= 0 || local_cols <= 0 || row_dofs.size() % local_rows != 0 ||
      col_dofs.size() / local_cols != row_dofs.size() / local_rows) {
    throw std::invalid_argument("ElementPattern: inconsistent element dof lists");
  }
  num_elements_ = static_cast<int>(row_dofs.size() / local_rows);
  const int entries = num_elements_ * local_size();

  struct Entry {
    int row, col, index;
  };
  std::vector<Entry> list;
  list.reserve(entries);
  for (int e = 0; e < num_elements_; ++e) {
    for (int r = 0; r < local_rows; ++r) {
      for (int c = 0; c < local_cols; ++c) {
        list.push_back({row_dofs[e * local_rows + r], col_dofs[e * local_cols + c],
                        e * local_size() + r * local_cols + c});
      }
    }
  }
  std::sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.row, a.col, a.index) < std::tie(b.row, b.col, b.index);
  });

  std::vector<int> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<int> col_idx;
  slot_of_entry_.assign(entries, -1);
  contrib_ptr_.assign(1, 0);
  contrib_entries_.reserve(entries);
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Entry& en = list[k];
    if (en.row < 0 || en.row >= rows || en.col < 0 || en.col >= cols) {
      throw std::invalid_argument("ElementPattern: dof out of range");
    }
    const bool new_slot = k == 0 || en.row != list[k - 1].row || en.col != list[k - 1].col;
    if (new_slot) {
      if (k > 0) contrib_ptr_.push_back(static_cast<int>(contrib_entries_.size()));
      col_idx.push_back(en.col);
      ++row_ptr[en.row + 1];
    }
    slot_of_entry_[en.index] = static_cast<int>(col_idx.size()) - 1;
    contrib_entries_.push_back(en.index);
  }
  contrib_ptr_.push_back(static_cast<int>(contrib_entries_.size()));
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  std::vector<double> zeros(col_idx.size(), 0.0);
  skeleton_ = CsrMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(zeros));
}

CsrMatrix ElementPattern::accumulate(std::span<const double> local_values) const {
  if (local_values.size() != slot_of_entry_.size()) {
    throw std::invalid_argument("ElementPattern::accumulate: wrong number of local values");
  }
  CsrMatrix out = skeleton_;
  double* values = out.values().data();
  const int slots = static_cast<int>(out.nnz());
#pragma omp parallel for schedule(static)
  for (int s = 0; s < slots; ++s) {
    double sum = 0.0;
    for (int k = contrib_ptr_[s]; k < contrib_ptr_[s + 1]; ++k) sum += local_values[contrib_entries_[k]];
    values[s] = sum;
  }
  return out;
}

CsrMatrix ElementPattern::accumulate_serial(std::span<const double> local_values) const {
  if (local_values.size() != slot_of_entry_.size()) {
    throw std::invalid_argument("ElementPattern::accumulate: wrong number of local values");
  }
  CsrMatrix out = skeleton_;
  auto& values = out.values();
  for (std::size_t k = 0; k < local_values.size(); ++k) values[slot_of_entry_[k]] += local_values[k];
  return out;
}

namespace {

struct BasisTables {
  std::array<std::array<double, 6>, 7> phi;
};

const BasisTables& basis_tables() {
  static const BasisTables tables = [] {
    BasisTables t;
    const auto& rule = triangle_rule();
    for (std::size_t q = 0; q < rule.size(); ++q) t.phi[q] = p2_values(rule[q].bary);
    return t;
  }();
  return tables;
}

}  // namespace

Assembler::Assembler(const TaylorHoodSpace& space)
    : Assembler(std::make_shared<const TaylorHoodSpace>(space)) {}

Assembler::Assembler(std::shared_ptr<const TaylorHoodSpace> space) : space_(std::move(space)) {
  const TriMesh& mesh = space_->mesh();
  const int nt = static_cast<int>(mesh.num_triangles());
  geometry_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles()[t];
    const Point& p0 = mesh.vertices()[tri[0]];
    const Point& p1 = mesh.vertices()[tri[1]];
    const Point& p2 = mesh.vertices()[tri[2]];
    const double area = mesh.signed_area(t);
    const double s = 1.0 / (2.0 * area);
    geometry_[t] = {area,
                    {{{(p1.y - p2.y) * s, (p2.x - p1.x) * s},
                      {(p2.y - p0.y) * s, (p0.x - p2.x) * s},
                      {(p0.y - p1.y) * s, (p1.x - p0.x) * s}}}};
  }

  const int nn = space_->num_nodes();
  std::vector<int> p2_dofs;
  p2_dofs.reserve(6 * static_cast<std::size_t>(nt));
  for (const auto& nodes : space_->element_nodes()) p2_dofs.insert(p2_dofs.end(), nodes.begin(), nodes.end());
  p2_pattern_ = ElementPattern(nn, nn, 6, 6, p2_dofs, p2_dofs);

  std::vector<int> p_dofs, v_dofs;
  p_dofs.reserve(3 * static_cast<std::size_t>(nt));
  v_dofs.reserve(12 * static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles()[t];
    p_dofs.insert(p_dofs.end(), tri.begin(), tri.end());
    for (int c = 0; c < 2; ++c) {
      for (int node : space_->element_nodes()[t]) v_dofs.push_back(space_->velocity_dof(c, node));
    }
  }
  div_pattern_ = ElementPattern(space_->num_pressure_dofs(), space_->num_velocity_dofs(), 3, 12, p_dofs, v_dofs);
}

template <typename Kernel>
CsrMatrix Assembler::assemble(const ElementPattern& pattern, Execution exec, Kernel&& kernel) const {
  const int ne = pattern.num_elements();
  const int ls = pattern.local_size();
  std::vector<double> local(static_cast<std::size_t>(ne) * ls);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (int e = 0; e < ne; ++e) kernel(e, std::span<double>(local.data() + static_cast<std::size_t>(e) * ls, ls));
    return pattern.accumulate(local);
  }
  for (int e = 0; e < ne; ++e) kernel(e, std::span<double>(local.data() + static_cast<std::size_t>(e) * ls, ls));
  return pattern.accumulate_serial(local);
}

CsrMatrix Assembler::scalar_stiffness(Execution exec) const {
  return assemble(p2_pattern_, exec, [this](int e, std::span<double> out) {
    const Geometry& g = geometry_[e];
    const auto& rule = triangle_rule();
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& qp : rule) {
      const auto grad = p2_gradients(qp.bary, g.grad_lambda);
      const double w = qp.weight * g.area;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) out[i * 6 + j] += w * dot(grad[i], grad[j]);
    }
  });
}

CsrMatrix Assembler::scalar_mass(Execution exec) const {
  return assemble(p2_pattern_, exec, [this](int e, std::span<double> out) {
    const Geometry& g = geometry_[e];
    const auto& rule = triangle_rule();
    const auto& tables = basis_tables();
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& phi = tables.phi[q];
      const double w = rule[q].weight * g.area;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) out[i * 6 + j] += w * phi[i] * phi[j];
    }
  });
}

CsrMatrix Assembler::scalar_convection(std::span<const double> a, Execution exec) const {
  if (a.size() != static_cast<std::size_t>(space_->num_velocity_dofs())) {
    throw std::invalid_argument("scalar_convection: advecting field has wrong length");
  }
  const int nn = space_->num_nodes();
  return assemble(p2_pattern_, exec, [this, a, nn](int e, std::span<double> out) {
    const Geometry& g = geometry_[e];
    const auto& nodes = space_->element_nodes()[e];
    const auto& rule = triangle_rule();
    const auto& tables = basis_tables();
    std::array<double, 6> ax, ay;
    for (int l = 0; l < 6; ++l) {
      ax[l] = a[nodes[l]];
      ay[l] = a[nn + nodes[l]];
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& phi = tables.phi[q];
      const auto grad = p2_gradients(rule[q].bary, g.grad_lambda);
      Vec2 aq{};
      double div = 0.0;
      for (int l = 0; l < 6; ++l) {
        aq.x += ax[l] * phi[l];
        aq.y += ay[l] * phi[l];
        div += ax[l] * grad[l].x + ay[l] * grad[l].y;
      }
      const double w = rule[q].weight * g.area;
      for (int j = 0; j < 6; ++j) {
        const double trial = dot(aq, grad[j]) + 0.5 * div * phi[j];
        for (int i = 0; i < 6; ++i) out[i * 6 + j] += w * trial * phi[i];
      }
    }
  });
}

CsrMatrix Assembler::divergence(Execution exec) const {
  return assemble(div_pattern_, exec, [this](int e, std::span<double> out) {
    const Geometry& g = geometry_[e];
    const auto& rule = triangle_rule();
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& qp : rule) {
      const auto grad = p2_gradients(qp.bary, g.grad_lambda);
      const double w = qp.weight * g.area;
      for (int r = 0; r < 3; ++r) {
        const double psi = qp.bary[r];
        for (int l = 0; l < 6; ++l) {
          out[r * 12 + l] += w * grad[l].x * psi;
          out[r * 12 + 6 + l] += w * grad[l].y * psi;
        }
      }
    }
  });
}

std::vector<double> Assembler::load(const VelocityFunction& f) const {
  const TriMesh& mesh = space_->mesh();
  const int nn = space_->num_nodes();
  std::vector<double> rhs(static_cast<std::size_t>(2) * nn, 0.0);
  if (!f) return rhs;
  const auto& rule = triangle_rule();
  const auto& tables = basis_tables();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto& nodes = space_->element_nodes()[t];
    const Point& p0 = mesh.vertices()[tri[0]];
    const Point& p1 = mesh.vertices()[tri[1]];
    const Point& p2 = mesh.vertices()[tri[2]];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule[q].bary;
      const auto fq = f(l[0] * p0.x + l[1] * p1.x + l[2] * p2.x, l[0] * p0.y + l[1] * p1.y + l[2] * p2.y);
      const double w = rule[q].weight * geometry_[t].area;
      for (int i = 0; i < 6; ++i) {
        rhs[nodes[i]] += w * fq[0] * tables.phi[q][i];
        rhs[nn + nodes[i]] += w * fq[1] * tables.phi[q][i];
      }
    }
  }
  return rhs;
}

CsrMatrix block_diagonal2(const CsrMatrix& scalar) {
  const int n = scalar.rows(), m = scalar.cols();
  const auto& ptr = scalar.row_ptr();
  std::vector<int> row_ptr(2 * static_cast<std::size_t>(n) + 1);
  std::vector<int> col_idx;
  std::vector<double> values;
  col_idx.reserve(2 * scalar.nnz());
  values.reserve(2 * scalar.nnz());
  row_ptr[0] = 0;
  for (int block = 0; block < 2; ++block) {
    for (int r = 0; r < n; ++r) {
      for (int k = ptr[r]; k < ptr[r + 1]; ++k) {
        col_idx.push_back(block * m + scalar.col_idx()[k]);
        values.push_back(scalar.values()[k]);
      }
      row_ptr[block * n + r + 1] = static_cast<int>(col_idx.size());
    }
  }
  return CsrMatrix(2 * n, 2 * m, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix assemble_stiffness(const TaylorHoodSpace& space) {
  return block_diagonal2(Assembler(space).scalar_stiffness());
}

CsrMatrix assemble_mass(const TaylorHoodSpace& space) { return block_diagonal2(Assembler(space).scalar_mass()); }

CsrMatrix assemble_convection(const TaylorHoodSpace& space, std::span<const double> a) {
  return block_diagonal2(Assembler(space).scalar_convection(a));
}

CsrMatrix assemble_divergence(const TaylorHoodSpace& space) { return Assembler(space).divergence(); }

std::vector<double> lump_mass(const CsrMatrix& mass) {
  if (mass.rows() != mass.cols()) throw std::invalid_argument("lump_mass: matrix must be square");
  double total = 0.0;
  for (double v : mass.values()) total += v;
  auto diag = mass.diagonal();
  double trace = 0.0;
  for (double d : diag) trace += d;
  if (!(trace > 0.0)) throw std::invalid_argument("lump_mass: non-positive trace");
  const double scale = total / trace;
  for (double& d : diag) d *= scale;
  return diag;
}

std::vector<double> interpolate_velocity(const TaylorHoodSpace& space, const VelocityFunction& f) {
  std::vector<double> u(space.num_velocity_dofs());
  for (int node = 0; node < space.num_nodes(); ++node) {
    const Point& p = space.nodes()[node];
    const auto v = f(p.x, p.y);
    u[space.velocity_dof(0, node)] = v[0];
    u[space.velocity_dof(1, node)] = v[1];
  }
  return u;
}

}  // namespace aapicard
