#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace aapicard {

struct Triplet {
  int row;
  int col;
  double value;
};

// Compressed sparse row matrix with strictly increasing column indices per row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
            std::vector<double> values);

  static CsrMatrix identity(int n);
  static CsrMatrix diagonal(std::span<const double> diag);
  // Duplicates are summed in input order, so the result does not depend on
  // anything but the sequence of triplets.
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  // Returns 0 for entries outside the pattern.
  double coeff(int row, int col) const;
  // Position of (row, col) in values(), or -1.
  int find(int row, int col) const;

  CsrMatrix transpose() const;
  std::vector<double> diagonal() const;
  double max_abs() const;
  // Maximum absolute row sum.
  double norm_inf() const;
  bool same_pattern(const CsrMatrix& other) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

// Keeps rows/cols whose map entry is >= 0, renumbered to that entry.
CsrMatrix restrict_matrix(const CsrMatrix& a, std::span<const int> row_map, int new_rows,
                          std::span<const int> col_map, int new_cols);

// y = A x; rows are distributed over OpenMP threads.
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x);

namespace reference {
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
}

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
// x^T M y.
double weighted_inner(const CsrMatrix& m, std::span<const double> x, std::span<const double> y);

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int pivot = -1) : std::runtime_error(what), pivot_(pivot) {}
  // Row/column index associated with the failure, or -1 when unknown.
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

// Sparse LU with a fill-reducing column ordering (UMFPACK). The symbolic
// analysis is reused by later factorize() calls on matrices with the same
// pattern.
class SparseLu {
 public:
  SparseLu();
  explicit SparseLu(const CsrMatrix& a);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;
  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;

  void factorize(const CsrMatrix& a);
  std::vector<double> solve(std::span<const double> b) const;
  int size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Sparse Cholesky (LL^T with AMD ordering) for symmetric positive definite matrices.
class SparseCholesky {
 public:
  SparseCholesky();
  explicit SparseCholesky(const CsrMatrix& s);
  ~SparseCholesky();
  SparseCholesky(SparseCholesky&&) noexcept;
  SparseCholesky& operator=(SparseCholesky&&) noexcept;
  SparseCholesky(const SparseCholesky&) = delete;
  SparseCholesky& operator=(const SparseCholesky&) = delete;

  std::vector<double> solve(std::span<const double> b) const;
  int size() const;
  bool empty() const { return impl_ == nullptr; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<double> sparse_lu_solve(const CsrMatrix& a, std::span<const double> b);
std::vector<double> sparse_spd_solve(const CsrMatrix& s, std::span<const double> b);

}  // namespace aapicard
