#pragma once

#include <optional>
#include <span>
#include <vector>

namespace aapicard {

// Small row-major dense matrix (Gram matrices of AA histories).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}
  DenseMatrix(int rows, int cols, std::vector<double> data);

  static DenseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const std::vector<double>& data() const { return data_; }

  DenseMatrix transpose() const;
  double frobenius_norm() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);

inline constexpr double kCholeskyPivotTolerance = 1e-13;

// Upper-triangular R with R^T R = G. Returns nullopt when a pivot drops to
// pivot_tol times the largest diagonal entry of G or below.
std::optional<DenseMatrix> dense_cholesky(const DenseMatrix& g,
                                          double pivot_tol = kCholeskyPivotTolerance);

// Solves R^T R x = b for an upper factor R.
std::vector<double> cholesky_solve(const DenseMatrix& r, std::span<const double> b);

}  // namespace aapicard
