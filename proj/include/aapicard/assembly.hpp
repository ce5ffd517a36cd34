#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "aapicard/quadrature.hpp"
#include "aapicard/space.hpp"
#include "aapicard/sparse.hpp"

namespace aapicard {

// Maps element-local matrix entries onto a fixed CSR skeleton. Each CSR slot
// keeps its contributions sorted by (element, local entry), so summation order
// is fixed regardless of how the local matrices were produced.
class ElementPattern {
 public:
  ElementPattern() = default;
  // row_dofs / col_dofs hold `local_rows` / `local_cols` global indices per element.
  ElementPattern(int rows, int cols, int local_rows, int local_cols, std::span<const int> row_dofs,
                 std::span<const int> col_dofs);

  int local_size() const { return local_rows_ * local_cols_; }
  int num_elements() const { return num_elements_; }
  const CsrMatrix& skeleton() const { return skeleton_; }

  // local_values: num_elements() * local_size() entries, element-major.
  CsrMatrix accumulate(std::span<const double> local_values) const;
  CsrMatrix accumulate_serial(std::span<const double> local_values) const;

 private:
  int local_rows_ = 0;
  int local_cols_ = 0;
  int num_elements_ = 0;
  CsrMatrix skeleton_;
  std::vector<int> slot_of_entry_;    // element-local entry -> CSR slot
  std::vector<int> contrib_ptr_;      // CSR slot -> range in contrib_entries_
  std::vector<int> contrib_entries_;  // element-local entries, ascending
};

enum class Execution { parallel, serial };

// Per-element geometry, quadrature tables and sparsity patterns for a space.
// Velocity operators come in two flavours: scalar (num_nodes square, the same
// block acts on both components) and vector (full velocity dofs, block diagonal).
class Assembler {
 public:
  explicit Assembler(std::shared_ptr<const TaylorHoodSpace> space);
  explicit Assembler(const TaylorHoodSpace& space);

  const TaylorHoodSpace& space() const { return *space_; }

  CsrMatrix scalar_stiffness(Execution exec = Execution::parallel) const;
  CsrMatrix scalar_mass(Execution exec = Execution::parallel) const;
  // Skew-symmetric convection b*(a, w, z) with advecting velocity `a` (full velocity vector).
  CsrMatrix scalar_convection(std::span<const double> a, Execution exec = Execution::parallel) const;
  // B with B(q, i) = (div phi_i, psi_q); num_pressure_dofs x num_velocity_dofs.
  CsrMatrix divergence(Execution exec = Execution::parallel) const;
  // (f, phi_i) for a body force f; full velocity vector.
  std::vector<double> load(const VelocityFunction& f) const;

  const ElementPattern& p2_pattern() const { return p2_pattern_; }

 private:
  struct Geometry {
    double area;
    std::array<Vec2, 3> grad_lambda;
  };

  template <typename Kernel>
  CsrMatrix assemble(const ElementPattern& pattern, Execution exec, Kernel&& kernel) const;

  std::shared_ptr<const TaylorHoodSpace> space_;
  std::vector<Geometry> geometry_;
  ElementPattern p2_pattern_;
  ElementPattern div_pattern_;
};

// Stacks a scalar operator into a block-diagonal two-component operator.
CsrMatrix block_diagonal2(const CsrMatrix& scalar);

CsrMatrix assemble_stiffness(const TaylorHoodSpace& space);
CsrMatrix assemble_mass(const TaylorHoodSpace& space);
CsrMatrix assemble_convection(const TaylorHoodSpace& space, std::span<const double> a);
CsrMatrix assemble_divergence(const TaylorHoodSpace& space);

// Diagonal mass lumping by scaled diagonal: d_i = M_ii * (1^T M 1) / trace(M).
// Preserves total mass and stays positive for quadratic elements.
std::vector<double> lump_mass(const CsrMatrix& mass);

// Nodal P2 interpolant of a velocity field (full velocity vector).
std::vector<double> interpolate_velocity(const TaylorHoodSpace& space, const VelocityFunction& f);

}  // namespace aapicard
