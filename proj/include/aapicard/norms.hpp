#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aapicard/sparse.hpp"

namespace aapicard {

enum class NormKind { h10, l2, lumped_l2, ell2, h_minus_1 };

inline constexpr std::array<NormKind, 5> kAllNorms{NormKind::h10, NormKind::l2, NormKind::lumped_l2,
                                                   NormKind::ell2, NormKind::h_minus_1};

// CLI spelling: h10, l2, lumped-l2, ell2, hminus1.
std::string_view to_string(NormKind kind);
std::optional<NormKind> parse_norm_kind(std::string_view text);

// Gram operator G defining the inner product (x, y) = x^T G y on free velocity
// dofs. For H^-1 the action is S^{-1} x with S the stiffness restricted to free
// dofs, via a shared cached Cholesky factorization.
class NormOperator {
 public:
  static NormOperator identity(int n);
  static NormOperator gram(NormKind kind, CsrMatrix matrix);
  static NormOperator diagonal(NormKind kind, std::vector<double> weights);
  static NormOperator inverse(NormKind kind, std::shared_ptr<const SparseCholesky> factor);

  NormKind kind() const { return kind_; }
  int size() const { return size_; }

  std::vector<double> apply(std::span<const double> x) const;
  double inner(std::span<const double> x, std::span<const double> y) const;
  double norm(std::span<const double> x) const;

 private:
  enum class Storage { identity, sparse, diagonal, inverse };

  NormKind kind_ = NormKind::ell2;
  Storage storage_ = Storage::identity;
  int size_ = 0;
  CsrMatrix matrix_;
  std::vector<double> weights_;
  std::shared_ptr<const SparseCholesky> factor_;
};

double discrete_norm(const NormOperator& op, std::span<const double> w);

// The five optimization norms over one free-dof space.
struct NormSet {
  NormOperator h10;
  NormOperator l2;
  NormOperator lumped_l2;
  NormOperator ell2;
  NormOperator h_minus_1;

  const NormOperator& get(NormKind kind) const;
};

// free_stiffness / free_mass: vector operators restricted to free velocity
// dofs. lumped_diag: lumped full mass diagonal gathered to free dofs.
NormSet make_norm_set(const CsrMatrix& free_stiffness, const CsrMatrix& free_mass,
                      std::vector<double> free_lumped_diag,
                      std::shared_ptr<const SparseCholesky> stiffness_factor);

}  // namespace aapicard
