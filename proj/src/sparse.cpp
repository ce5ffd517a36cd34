#include "aapicard/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

extern "C" {
#include <umfpack.h>
}

namespace aapicard {

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                     std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("CsrMatrix: negative dimension");
  if (row_ptr_.size() != static_cast<std::size_t>(rows) + 1 || row_ptr_.front() != 0) {
    throw std::invalid_argument("CsrMatrix: malformed row offsets");
  }
  if (col_idx_.size() != values_.size() || static_cast<std::size_t>(row_ptr_.back()) != values_.size()) {
    throw std::invalid_argument("CsrMatrix: offsets do not match entry count");
  }
  for (int r = 0; r < rows; ++r) {
    if (row_ptr_[r + 1] < row_ptr_[r]) throw std::invalid_argument("CsrMatrix: offsets not monotone");
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols) {
        throw std::invalid_argument("CsrMatrix: column index out of range");
      }
      if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1]) {
        throw std::invalid_argument("CsrMatrix: column indices not strictly increasing");
      }
      if (std::isnan(values_[k])) throw std::invalid_argument("CsrMatrix: NaN entry");
    }
  }
}

CsrMatrix CsrMatrix::identity(int n) {
  std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  return diagonal(ones);
}

CsrMatrix CsrMatrix::diagonal(std::span<const double> diag) {
  const int n = static_cast<int>(diag.size());
  std::vector<int> row_ptr(n + 1), col_idx(n);
  std::iota(row_ptr.begin(), row_ptr.end(), 0);
  std::iota(col_idx.begin(), col_idx.end(), 0);
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx),
                   std::vector<double>(diag.begin(), diag.end()));
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<int> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> values;
  col_idx.reserve(triplets.size());
  values.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::invalid_argument("from_triplets: index out of range");
    }
    if (k > 0 && t.row == triplets[k - 1].row && t.col == triplets[k - 1].col) {
      values.back() += t.value;
    } else {
      col_idx.push_back(t.col);
      values.push_back(t.value);
      ++row_ptr[t.row + 1];
    }
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  return CsrMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

int CsrMatrix::find(int row, int col) const {
  const auto first = col_idx_.begin() + row_ptr_[row];
  const auto last = col_idx_.begin() + row_ptr_[row + 1];
  const auto it = std::lower_bound(first, last, col);
  return (it != last && *it == col) ? static_cast<int>(it - col_idx_.begin()) : -1;
}

double CsrMatrix::coeff(int row, int col) const {
  const int k = find(row, col);
  return k < 0 ? 0.0 : values_[k];
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<int> row_ptr(static_cast<std::size_t>(cols_) + 1, 0);
  for (int c : col_idx_) ++row_ptr[c + 1];
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  std::vector<int> next(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<int> col_idx(nnz());
  std::vector<double> values(nnz());
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int dst = next[col_idx_[k]]++;
      col_idx[dst] = r;
      values[dst] = values_[k];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(std::min(rows_, cols_)), 0.0);
  for (int r = 0; r < static_cast<int>(d.size()); ++r) d[r] = coeff(r, r);
  return d;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::norm_inf() const {
  double m = 0.0;
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::abs(values_[k]);
    m = std::max(m, s);
  }
  return m;
}

bool CsrMatrix::same_pattern(const CsrMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && row_ptr_ == other.row_ptr_ &&
         col_idx_ == other.col_idx_;
}

CsrMatrix restrict_matrix(const CsrMatrix& a, std::span<const int> row_map, int new_rows,
                          std::span<const int> col_map, int new_cols) {
  if (row_map.size() != static_cast<std::size_t>(a.rows()) ||
      col_map.size() != static_cast<std::size_t>(a.cols())) {
    throw std::invalid_argument("restrict_matrix: map size mismatch");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(a.nnz());
  for (int r = 0; r < a.rows(); ++r) {
    if (row_map[r] < 0) continue;
    for (int k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
      const int c = col_map[a.col_idx()[k]];
      if (c >= 0) triplets.push_back({row_map[r], c, a.values()[k]});
    }
  }
  return CsrMatrix::from_triplets(new_rows, new_cols, std::move(triplets));
}

namespace {

void check_spmv_dims(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != static_cast<std::size_t>(a.cols()) || y.size() != static_cast<std::size_t>(a.rows())) {
    throw std::invalid_argument("spmv: dimension mismatch");
  }
}

}  // namespace

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv_dims(a, x, y);
  const int* ptr = a.row_ptr().data();
  const int* col = a.col_idx().data();
  const double* val = a.values().data();
  const int rows = a.rows();
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int k = ptr[r]; k < ptr[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(static_cast<std::size_t>(a.rows()));
  spmv(a, x, y);
  return y;
}

namespace reference {

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv_dims(a, x, y);
  for (int r = 0; r < a.rows(); ++r) {
    double s = 0.0;
    for (int k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) s += a.values()[k] * x[a.col_idx()[k]];
    y[r] = s;
  }
}

}  // namespace reference

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  // Serial on purpose: a fixed summation order keeps iteration logs reproducible.
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double weighted_inner(const CsrMatrix& m, std::span<const double> x, std::span<const double> y) {
  if (m.rows() != m.cols() || x.size() != static_cast<std::size_t>(m.rows()) || y.size() != x.size()) {
    throw std::invalid_argument("weighted_inner: dimension mismatch");
  }
  const auto my = spmv(m, y);
  return dot(x, my);
}

// --- SparseLu -------------------------------------------------------------

struct SparseLu::Impl {
  CsrMatrix a;
  void* symbolic = nullptr;
  void* numeric = nullptr;
  double control[UMFPACK_CONTROL];

  Impl() { umfpack_di_defaults(control); }
  ~Impl() {
    if (numeric) umfpack_di_free_numeric(&numeric);
    if (symbolic) umfpack_di_free_symbolic(&symbolic);
  }

  // UMFPACK reads compressed-column input; the CSR arrays of A are the CSC
  // arrays of A^T, so everything below factors A^T and solves with UMFPACK_At.
  int* ap() { return const_cast<int*>(a.row_ptr().data()); }
  int* ai() { return const_cast<int*>(a.col_idx().data()); }
  double* ax() { return const_cast<double*>(a.values().data()); }

  void analyze() {
    if (symbolic) umfpack_di_free_symbolic(&symbolic);
    double info[UMFPACK_INFO];
    const int status = umfpack_di_symbolic(a.rows(), a.cols(), ap(), ai(), ax(), &symbolic, control, info);
    if (status != UMFPACK_OK) {
      symbolic = nullptr;
      throw SolverError("sparse LU: symbolic analysis failed (status " + std::to_string(status) +
                        "); matrix is structurally singular or invalid");
    }
  }

  void numeric_factor() {
    if (numeric) umfpack_di_free_numeric(&numeric);
    double info[UMFPACK_INFO];
    const int status = umfpack_di_numeric(ap(), ai(), ax(), symbolic, &numeric, control, info);
    if (status == UMFPACK_WARNING_singular_matrix) {
      const int pivot = zero_pivot();
      throw SolverError("sparse LU: matrix is numerically singular (zero pivot at row " +
                            std::to_string(pivot) + ")",
                        pivot);
    }
    if (status != UMFPACK_OK) {
      if (numeric) umfpack_di_free_numeric(&numeric);
      numeric = nullptr;
      throw SolverError("sparse LU: numeric factorization failed (status " + std::to_string(status) + ")");
    }
  }

  int zero_pivot() {
    const int n = a.rows();
    std::vector<int> q(n);
    std::vector<double> udiag(n);
    int do_recip = 0;
    umfpack_di_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, q.data(),
                           udiag.data(), &do_recip, nullptr, numeric);
    umfpack_di_free_numeric(&numeric);
    numeric = nullptr;
    for (int k = 0; k < n; ++k) {
      if (udiag[k] == 0.0) return q[k];
    }
    return -1;
  }
};

SparseLu::SparseLu() = default;
SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

SparseLu::SparseLu(const CsrMatrix& a) { factorize(a); }

void SparseLu::factorize(const CsrMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("sparse LU: matrix must be square");
  if (a.rows() == 0) throw std::invalid_argument("sparse LU: empty matrix");
  const bool reuse = impl_ && impl_->symbolic && impl_->a.same_pattern(a);
  if (!impl_) impl_ = std::make_unique<Impl>();
  impl_->a = a;
  if (!reuse) impl_->analyze();
  impl_->numeric_factor();
}

std::vector<double> SparseLu::solve(std::span<const double> b) const {
  if (!impl_ || !impl_->numeric) throw std::logic_error("sparse LU: solve before factorize");
  if (b.size() != static_cast<std::size_t>(impl_->a.rows())) {
    throw std::invalid_argument("sparse LU: dimension mismatch");
  }
  std::vector<double> x(b.size());
  double info[UMFPACK_INFO];
  const int status = umfpack_di_solve(UMFPACK_At, impl_->ap(), impl_->ai(), impl_->ax(), x.data(),
                                      b.data(), impl_->numeric, impl_->control, info);
  if (status != UMFPACK_OK) throw SolverError("sparse LU: solve failed (status " + std::to_string(status) + ")");
  return x;
}

int SparseLu::size() const { return impl_ ? impl_->a.rows() : 0; }

// --- SparseCholesky -------------------------------------------------------

struct SparseCholesky::Impl {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
  int n = 0;
};

SparseCholesky::SparseCholesky() = default;
SparseCholesky::~SparseCholesky() = default;
SparseCholesky::SparseCholesky(SparseCholesky&&) noexcept = default;
SparseCholesky& SparseCholesky::operator=(SparseCholesky&&) noexcept = default;

SparseCholesky::SparseCholesky(const CsrMatrix& s) : impl_(std::make_unique<Impl>()) {
  if (s.rows() != s.cols()) throw std::invalid_argument("sparse Cholesky: matrix must be square");
  impl_->n = s.rows();
  Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> view(
      s.rows(), s.cols(), static_cast<Eigen::Index>(s.nnz()), s.row_ptr().data(), s.col_idx().data(),
      s.values().data());
  const Eigen::SparseMatrix<double> colmajor = view;
  impl_->llt.compute(colmajor);
  if (impl_->llt.info() != Eigen::Success) {
    throw SolverError("sparse Cholesky: matrix is not symmetric positive definite");
  }
}

std::vector<double> SparseCholesky::solve(std::span<const double> b) const {
  if (!impl_) throw std::logic_error("sparse Cholesky: solve before factorize");
  if (b.size() != static_cast<std::size_t>(impl_->n)) {
    throw std::invalid_argument("sparse Cholesky: dimension mismatch");
  }
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd x = impl_->llt.solve(rhs);
  return std::vector<double>(x.data(), x.data() + x.size());
}

int SparseCholesky::size() const { return impl_ ? impl_->n : 0; }

std::vector<double> sparse_lu_solve(const CsrMatrix& a, std::span<const double> b) {
  return SparseLu(a).solve(b);
}

std::vector<double> sparse_spd_solve(const CsrMatrix& s, std::span<const double> b) {
  return SparseCholesky(s).solve(b);
}

}  // namespace aapicard
