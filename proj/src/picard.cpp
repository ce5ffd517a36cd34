#include "aapicard/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aapicard {

PicardProblem::PicardProblem(TaylorHoodSpace space, double nu, VelocityFunction body_force,
                             bool include_convection)
    : space_(std::make_shared<const TaylorHoodSpace>(std::move(space))),
      nu_(nu),
      include_convection_(include_convection),
      assembler_(space_) {
  if (!(nu > 0.0)) throw std::invalid_argument("PicardProblem: viscosity must be positive");
  const TaylorHoodSpace& sp = *space_;

  scalar_stiffness_ = assembler_.scalar_stiffness();
  stiffness_ = block_diagonal2(scalar_stiffness_);
  mass_ = block_diagonal2(assembler_.scalar_mass());
  divergence_ = assembler_.divergence();
  divergence_t_ = divergence_.transpose();
  load_ = assembler_.load(body_force);

  const int nf = sp.num_free_velocity_dofs();
  free_stiffness_ = restrict_matrix(stiffness_, sp.free_index(), nf, sp.free_index(), nf);
  free_mass_ = restrict_matrix(mass_, sp.free_index(), nf, sp.free_index(), nf);
  if (nf > 0) stiffness_factor_ = std::make_shared<const SparseCholesky>(free_stiffness_);

  const int np = sp.num_pressure_dofs();
  pressure_index_.assign(np, -1);
  for (int q = 0; q < np; ++q) {
    if (q != sp.pinned_pressure_dof()) pressure_index_[q] = num_pressure_unknowns_++;
  }
  pressure_weights_.assign(np, 0.0);
  const TriMesh& mesh = sp.mesh();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    for (int v : mesh.triangles()[t]) pressure_weights_[v] += mesh.signed_area(t) / 3.0;
  }
}

NormSet PicardProblem::norms() const {
  auto lumped = space_->gather_free(lump_mass(mass_));
  return make_norm_set(free_stiffness_, free_mass_, std::move(lumped), stiffness_factor_);
}

DiscreteField PicardProblem::initial_guess() const {
  return {space_->dirichlet_values(), std::vector<double>(space_->num_pressure_dofs(), 0.0)};
}

// Unknown layout: free velocity dofs (space order), then non-pinned pressures.
// Velocity rows: [nu K + N](free, free) and -B^T; pressure rows: -B(:, free).
CsrMatrix PicardProblem::saddle_matrix(const CsrMatrix& a_s, std::vector<double>& rhs) const {
  const TaylorHoodSpace& sp = *space_;
  const int nn = sp.num_nodes();
  const int nf = sp.num_free_velocity_dofs();
  const int n = nf + num_pressure_unknowns_;
  const auto& free_index = sp.free_index();
  const auto& lift = sp.dirichlet_values();

  std::vector<int> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> values;
  col_idx.reserve(2 * a_s.nnz() + 4 * divergence_.nnz());
  values.reserve(col_idx.capacity());
  rhs.assign(n, 0.0);

  int row = 0;
  for (int dof : sp.free_velocity_dofs()) {
    const int c = dof / nn, i = dof % nn;
    double b = load_[dof];
    for (int k = a_s.row_ptr()[i]; k < a_s.row_ptr()[i + 1]; ++k) {
      const int col_dof = c * nn + a_s.col_idx()[k];
      const int fj = free_index[col_dof];
      if (fj >= 0) {
        col_idx.push_back(fj);
        values.push_back(a_s.values()[k]);
      } else {
        b -= a_s.values()[k] * lift[col_dof];
      }
    }
    for (int k = divergence_t_.row_ptr()[dof]; k < divergence_t_.row_ptr()[dof + 1]; ++k) {
      const int pq = pressure_index_[divergence_t_.col_idx()[k]];
      if (pq >= 0) {
        col_idx.push_back(nf + pq);
        values.push_back(-divergence_t_.values()[k]);
      }
    }
    rhs[row] = b;
    row_ptr[++row] = static_cast<int>(col_idx.size());
  }
  for (int q = 0; q < sp.num_pressure_dofs(); ++q) {
    if (pressure_index_[q] < 0) continue;
    double b = 0.0;
    for (int k = divergence_.row_ptr()[q]; k < divergence_.row_ptr()[q + 1]; ++k) {
      const int dof = divergence_.col_idx()[k];
      const int fj = free_index[dof];
      if (fj >= 0) {
        col_idx.push_back(fj);
        values.push_back(-divergence_.values()[k]);
      } else {
        b += divergence_.values()[k] * lift[dof];
      }
    }
    rhs[row] = b;
    row_ptr[++row] = static_cast<int>(col_idx.size());
  }
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

DiscreteField PicardProblem::apply_g(const DiscreteField& u_k) {
  const TaylorHoodSpace& sp = *space_;
  if (u_k.velocity.size() != static_cast<std::size_t>(sp.num_velocity_dofs())) {
    throw std::invalid_argument("apply_g: velocity has wrong length");
  }

  CsrMatrix a_s = include_convection_ ? assembler_.scalar_convection(u_k.velocity)
                                      : assembler_.p2_pattern().skeleton();
  {
    auto& v = a_s.values();
    const auto& k = scalar_stiffness_.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += nu_ * k[i];
  }

  std::vector<double> rhs;
  const CsrMatrix system = saddle_matrix(a_s, rhs);
  lu_.factorize(system);
  const auto x = lu_.solve(rhs);

  // Linear-solve residual guard.
  const auto ax = spmv(system, x);
  double r_inf = 0.0, x_inf = 0.0, b_inf = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    r_inf = std::max(r_inf, std::abs(ax[i] - rhs[i]));
    x_inf = std::max(x_inf, std::abs(x[i]));
    b_inf = std::max(b_inf, std::abs(rhs[i]));
  }
  if (!(r_inf <= 1e-9 * (system.norm_inf() * x_inf + b_inf))) {
    throw SolverError("Oseen solve: linear residual " + std::to_string(r_inf) + " exceeds tolerance");
  }

  const int nf = sp.num_free_velocity_dofs();
  DiscreteField out;
  out.velocity = sp.dirichlet_values();
  sp.scatter_free(std::span<const double>(x.data(), nf), out.velocity);
  out.pressure.assign(sp.num_pressure_dofs(), 0.0);
  for (int q = 0; q < sp.num_pressure_dofs(); ++q) {
    if (pressure_index_[q] >= 0) out.pressure[q] = x[nf + pressure_index_[q]];
  }
  if (sp.pinned_pressure_dof() >= 0) {
    double integral = 0.0, area = 0.0;
    for (int q = 0; q < sp.num_pressure_dofs(); ++q) {
      integral += pressure_weights_[q] * out.pressure[q];
      area += pressure_weights_[q];
    }
    const double mean = integral / area;
    for (double& p : out.pressure) p -= mean;
  }
  return out;
}

double PicardProblem::load_dual_norm() const {
  if (!stiffness_factor_) return 0.0;
  const auto f = space_->gather_free(load_);
  const auto y = stiffness_factor_->solve(f);
  return std::sqrt(std::max(0.0, dot(f, y)));
}

DiscreteField residual(const PicardProblem& problem, const DiscreteField& u_k, const DiscreteField& u_tilde) {
  const TaylorHoodSpace& sp = problem.space();
  if (u_k.velocity.size() != u_tilde.velocity.size() ||
      u_k.velocity.size() != static_cast<std::size_t>(sp.num_velocity_dofs())) {
    throw std::invalid_argument("residual: fields live on different spaces");
  }
  DiscreteField w;
  w.velocity.assign(u_k.velocity.size(), 0.0);
  for (int dof : sp.free_velocity_dofs()) w.velocity[dof] = u_tilde.velocity[dof] - u_k.velocity[dof];
  return w;
}

StabilityCheck picard_stability_check(const PicardProblem& problem, const DiscreteField& u_tilde) {
  StabilityCheck check;
  check.grad_norm = std::sqrt(std::max(0.0, weighted_inner(problem.stiffness(), u_tilde.velocity, u_tilde.velocity)));
  const double dual = problem.load_dual_norm();
  check.ratio = dual > 0.0 ? problem.nu() * check.grad_norm / dual : std::numeric_limits<double>::quiet_NaN();
  return check;
}

}  // namespace aapicard
