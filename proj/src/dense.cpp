#include "aapicard/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aapicard {

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("DenseMatrix: data size does not match dimensions");
  }
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("DenseMatrix product: dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k)
      for (int j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("DenseMatrix difference: dimension mismatch");
  }
  DenseMatrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

std::optional<DenseMatrix> dense_cholesky(const DenseMatrix& g, double pivot_tol) {
  if (g.rows() != g.cols()) throw std::invalid_argument("dense_cholesky: matrix must be square");
  const int n = g.rows();
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, g(i, i));
  const double threshold = pivot_tol * max_diag;

  DenseMatrix r(n, n);
  for (int j = 0; j < n; ++j) {
    double pivot = g(j, j);
    for (int k = 0; k < j; ++k) pivot -= r(k, j) * r(k, j);
    if (!(pivot > threshold) || !std::isfinite(pivot)) return std::nullopt;
    const double rjj = std::sqrt(pivot);
    r(j, j) = rjj;
    for (int i = j + 1; i < n; ++i) {
      double s = g(j, i);
      for (int k = 0; k < j; ++k) s -= r(k, j) * r(k, i);
      r(j, i) = s / rjj;
    }
  }
  return r;
}

std::vector<double> cholesky_solve(const DenseMatrix& r, std::span<const double> b) {
  const int n = r.rows();
  if (b.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("cholesky_solve: dimension mismatch");
  // R^T y = b
  std::vector<double> y(b.begin(), b.end());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) y[i] -= r(k, i) * y[k];
    y[i] /= r(i, i);
  }
  // R x = y
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) y[i] -= r(i, k) * y[k];
    y[i] /= r(i, i);
  }
  return y;
}

}  // namespace aapicard
