#include "aapicard/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aapicard {

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::h10: return "h10";
    case NormKind::l2: return "l2";
    case NormKind::lumped_l2: return "lumped-l2";
    case NormKind::ell2: return "ell2";
    case NormKind::h_minus_1: return "hminus1";
  }
  return "unknown";
}

std::optional<NormKind> parse_norm_kind(std::string_view text) {
  for (NormKind kind : kAllNorms) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

NormOperator NormOperator::identity(int n) {
  NormOperator op;
  op.kind_ = NormKind::ell2;
  op.storage_ = Storage::identity;
  op.size_ = n;
  return op;
}

NormOperator NormOperator::gram(NormKind kind, CsrMatrix matrix) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("NormOperator: Gram matrix must be square");
  NormOperator op;
  op.kind_ = kind;
  op.storage_ = Storage::sparse;
  op.size_ = matrix.rows();
  op.matrix_ = std::move(matrix);
  return op;
}

NormOperator NormOperator::diagonal(NormKind kind, std::vector<double> weights) {
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("NormOperator: diagonal weights must be positive");
  }
  NormOperator op;
  op.kind_ = kind;
  op.storage_ = Storage::diagonal;
  op.size_ = static_cast<int>(weights.size());
  op.weights_ = std::move(weights);
  return op;
}

NormOperator NormOperator::inverse(NormKind kind, std::shared_ptr<const SparseCholesky> factor) {
  NormOperator op;
  op.kind_ = kind;
  op.storage_ = Storage::inverse;
  op.size_ = factor ? factor->size() : 0;
  op.factor_ = std::move(factor);
  return op;
}

std::vector<double> NormOperator::apply(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(size_)) throw std::invalid_argument("NormOperator: dimension mismatch");
  switch (storage_) {
    case Storage::identity: return {x.begin(), x.end()};
    case Storage::sparse: return spmv(matrix_, x);
    case Storage::diagonal: {
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = weights_[i] * x[i];
      return y;
    }
    case Storage::inverse:
      if (!factor_ || factor_->empty()) throw std::logic_error("NormOperator: H^-1 norm without a stiffness factorization");
      return factor_->solve(x);
  }
  throw std::logic_error("NormOperator: unknown storage");
}

double NormOperator::inner(std::span<const double> x, std::span<const double> y) const {
  if (storage_ == Storage::identity) return dot(x, y);
  return dot(x, apply(y));
}

double NormOperator::norm(std::span<const double> x) const {
  // Clamp tiny negative round-off of a semidefinite form.
  return std::sqrt(std::max(0.0, inner(x, x)));
}

double discrete_norm(const NormOperator& op, std::span<const double> w) { return op.norm(w); }

const NormOperator& NormSet::get(NormKind kind) const {
  switch (kind) {
    case NormKind::h10: return h10;
    case NormKind::l2: return l2;
    case NormKind::lumped_l2: return lumped_l2;
    case NormKind::ell2: return ell2;
    case NormKind::h_minus_1: return h_minus_1;
  }
  throw std::logic_error("NormSet: unknown norm");
}

NormSet make_norm_set(const CsrMatrix& free_stiffness, const CsrMatrix& free_mass,
                      std::vector<double> free_lumped_diag,
                      std::shared_ptr<const SparseCholesky> stiffness_factor) {
  return NormSet{NormOperator::gram(NormKind::h10, free_stiffness),
                 NormOperator::gram(NormKind::l2, free_mass),
                 NormOperator::diagonal(NormKind::lumped_l2, std::move(free_lumped_diag)),
                 NormOperator::identity(free_stiffness.rows()),
                 NormOperator::inverse(NormKind::h_minus_1, std::move(stiffness_factor))};
}

}  // namespace aapicard
