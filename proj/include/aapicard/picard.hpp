#pragma once

#include <memory>
#include <vector>

#include "aapicard/assembly.hpp"
#include "aapicard/norms.hpp"
#include "aapicard/space.hpp"
#include "aapicard/sparse.hpp"

namespace aapicard {

// The Picard fixed-point map g: given u_k, solve the Oseen problem
//   nu (grad u, grad v) + b*(u_k, u, v) - (p, div v) = (f, v),  (div u, q) = 0
// on the Taylor-Hood space. Operators that do not depend on u_k are assembled
// once; the saddle-point matrix pattern is fixed, so the LU symbolic analysis
// is reused across calls.
class PicardProblem {
 public:
  PicardProblem(TaylorHoodSpace space, double nu, VelocityFunction body_force = {},
                bool include_convection = true);

  const TaylorHoodSpace& space() const { return *space_; }
  double nu() const { return nu_; }
  bool include_convection() const { return include_convection_; }

  // Full velocity-dof operators (block diagonal over components).
  const CsrMatrix& stiffness() const { return stiffness_; }
  const CsrMatrix& mass() const { return mass_; }
  const CsrMatrix& divergence() const { return divergence_; }
  const std::vector<double>& load() const { return load_; }

  // Restricted to free velocity dofs.
  const CsrMatrix& free_stiffness() const { return free_stiffness_; }
  const CsrMatrix& free_mass() const { return free_mass_; }
  std::shared_ptr<const SparseCholesky> stiffness_factor() const { return stiffness_factor_; }
  NormSet norms() const;

  // u_0 = 0 in the interior, boundary values on constrained dofs.
  DiscreteField initial_guess() const;

  DiscreteField apply_g(const DiscreteField& u_k);

  // sqrt(f^T S^{-1} f) over free dofs: the discrete ||f||_{-1}.
  double load_dual_norm() const;

 private:
  CsrMatrix saddle_matrix(const CsrMatrix& scalar_operator, std::vector<double>& rhs) const;

  std::shared_ptr<const TaylorHoodSpace> space_;
  double nu_;
  bool include_convection_;
  Assembler assembler_;
  CsrMatrix scalar_stiffness_;
  CsrMatrix stiffness_;
  CsrMatrix mass_;
  CsrMatrix divergence_;
  CsrMatrix divergence_t_;
  CsrMatrix free_stiffness_;
  CsrMatrix free_mass_;
  std::vector<double> load_;
  std::vector<int> pressure_index_;
  int num_pressure_unknowns_ = 0;
  std::vector<double> pressure_weights_;
  std::shared_ptr<const SparseCholesky> stiffness_factor_;
  SparseLu lu_;
};

// w = u_tilde - u_k on free dofs; constrained entries are exactly zero.
DiscreteField residual(const PicardProblem& problem, const DiscreteField& u_k, const DiscreteField& u_tilde);

struct StabilityCheck {
  double grad_norm = 0.0;  // ||grad u_tilde||
  double ratio = 0.0;      // nu ||grad u_tilde|| / ||f||_{-1}; NaN when f = 0
};

StabilityCheck picard_stability_check(const PicardProblem& problem, const DiscreteField& u_tilde);

}  // namespace aapicard
