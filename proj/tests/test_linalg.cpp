#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "aapicard/assembly.hpp"
#include "aapicard/dense.hpp"
#include "aapicard/norms.hpp"
#include "aapicard/sparse.hpp"

using namespace aapicard;

namespace {

// Random sparse matrix with a dominant diagonal; about `per_row` off-diagonals per row.
CsrMatrix random_sparse(std::mt19937_64& rng, int n, int per_row, bool symmetric) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> col(0, n - 1);
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0 * per_row + 1.0});
    for (int k = 0; k < per_row; ++k) {
      const int j = col(rng);
      const double v = uni(rng);
      t.push_back({i, j, v});
      if (symmetric) t.push_back({j, i, v});
    }
  }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += (a[i] - b[i]) * (a[i] - b[i]);
    s += b[i] * b[i];
  }
  return std::sqrt(d / s);
}

}  // namespace

TEST_CASE("spmv small cases") {
  const std::vector<double> x{1, 2, 3};
  CHECK(spmv(CsrMatrix::identity(3), x) == x);
  const auto zero = CsrMatrix::from_triplets(3, 3, {});
  CHECK(spmv(zero, x) == std::vector<double>{0, 0, 0});
  const auto a = CsrMatrix::from_triplets(2, 2, {{0, 0, 2}, {1, 0, 1}, {1, 1, 3}});
  CHECK(spmv(a, std::vector<double>{1, 1}) == std::vector<double>{2, 4});
}

TEST_CASE("triplets are summed and transposed") {
  const auto a = CsrMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {0, 2, 2.5}, {1, 0, -1.0}, {0, 0, 4.0}});
  CHECK(a.nnz() == 3);
  CHECK(a.coeff(0, 2) == 3.5);
  CHECK(a.coeff(1, 1) == 0.0);
  const auto at = a.transpose();
  CHECK(at.rows() == 3);
  CHECK(at.coeff(2, 0) == 3.5);
  CHECK(at.coeff(0, 1) == -1.0);
  CHECK(a.norm_inf() == 7.5);
}

TEST_CASE("parallel spmv matches the serial reference bitwise") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int n : {1, 7, 100, 2000}) {
    const auto a = random_sparse(rng, n, 6, false);
    std::vector<double> x(n), y1(n), y2(n);
    for (auto& v : x) v = uni(rng);
    spmv(a, x, y1);
    reference::spmv(a, x, y2);
    CHECK(y1 == y2);
  }
}

TEST_CASE("weighted inner product") {
  const std::vector<double> ones{1, 1};
  CHECK(weighted_inner(CsrMatrix::identity(2), ones, ones) == 2.0);
  const std::vector<double> d{2, 3};
  CHECK(weighted_inner(CsrMatrix::diagonal(d), ones, ones) == 5.0);

  // Gram-Schmidt in the M inner product gives M-orthogonal vectors.
  std::mt19937_64 rng(9);
  const auto m = random_sparse(rng, 40, 3, true);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> x(40), y(40);
  for (auto& v : x) v = uni(rng);
  for (auto& v : y) v = uni(rng);
  const double c = weighted_inner(m, x, y) / weighted_inner(m, x, x);
  for (int i = 0; i < 40; ++i) y[i] -= c * x[i];
  CHECK(std::abs(weighted_inner(m, x, y)) <= 1e-12);
}

TEST_CASE("dense Cholesky") {
  const DenseMatrix g(2, 2, {4, 2, 2, 3});
  const auto r = dense_cholesky(g);
  REQUIRE(r);
  CHECK((*r)(0, 0) == doctest::Approx(2.0));
  CHECK((*r)(0, 1) == doctest::Approx(1.0));
  CHECK((*r)(1, 0) == 0.0);
  CHECK((*r)(1, 1) == doctest::Approx(std::sqrt(2.0)));

  const auto id = dense_cholesky(DenseMatrix::identity(3));
  REQUIRE(id);
  CHECK((*id - DenseMatrix::identity(3)).frobenius_norm() == 0.0);

  CHECK_FALSE(dense_cholesky(DenseMatrix(2, 2, {1, 1, 1, 1})));

  const auto x = cholesky_solve(*r, std::vector<double>{6, 5});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("random SPD dense factorization reproduces G") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int n = 1; n <= 6; ++n) {
    DenseMatrix a(n + 2, n);
    for (int i = 0; i < n + 2; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = uni(rng);
    }
    const DenseMatrix g = a.transpose() * a;
    const auto r = dense_cholesky(g);
    REQUIRE(r);
    CHECK((r->transpose() * *r - g).frobenius_norm() <= 1e-13 * g.frobenius_norm());
  }
}

TEST_CASE("sparse LU") {
  const std::vector<double> b{2, 4};
  CHECK(sparse_lu_solve(CsrMatrix::identity(2), b) == b);
  const std::vector<double> d{2, 4};
  const auto x = sparse_lu_solve(CsrMatrix::diagonal(d), b);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const auto a = random_sparse(rng, 50, 4, false);
  std::vector<double> xs(50);
  for (auto& v : xs) v = uni(rng);
  const auto rhs = spmv(a, xs);
  CHECK(rel_diff(sparse_lu_solve(a, rhs), xs) <= 1e-8);
}

TEST_CASE("sparse LU reuses its analysis for a new matrix with the same pattern") {
  std::mt19937_64 rng(4);
  auto a = random_sparse(rng, 30, 3, false);
  SparseLu lu(a);
  for (auto& v : a.values()) v *= 1.5;
  lu.factorize(a);
  std::vector<double> xs(30, 1.0);
  CHECK(rel_diff(lu.solve(spmv(a, xs)), xs) <= 1e-12);
}

TEST_CASE("singular matrix raises a solver error") {
  const auto a = CsrMatrix::from_triplets(3, 3, {{0, 0, 1}, {1, 1, 1}, {2, 0, 1}});
  CHECK_THROWS_AS(sparse_lu_solve(a, std::vector<double>{1, 1, 1}), SolverError);
}

TEST_CASE("sparse Cholesky") {
  const std::vector<double> b{1, 1, 1};
  CHECK(sparse_spd_solve(CsrMatrix::identity(3), b) == b);
  const auto lap = CsrMatrix::from_triplets(3, 3, {{0, 0, 2}, {0, 1, -1}, {1, 0, -1}, {1, 1, 2}, {1, 2, -1},
                                                   {2, 1, -1}, {2, 2, 2}});
  const auto x = sparse_spd_solve(lap, b);
  CHECK(x[0] == doctest::Approx(1.5));
  CHECK(x[1] == doctest::Approx(2.0));
  CHECK(x[2] == doctest::Approx(1.5));
}

TEST_CASE("assembled stiffness solve") {
  const auto space = build_space(unit_square_mesh(6), cavity_conditions());
  const auto k = assemble_stiffness(space);
  const auto k_ff = restrict_matrix(k, space.free_index(), space.num_free_velocity_dofs(), space.free_index(),
                                    space.num_free_velocity_dofs());
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> b(k_ff.rows());
  for (auto& v : b) v = uni(rng);
  const auto x = sparse_spd_solve(k_ff, b);
  CHECK(rel_diff(spmv(k_ff, x), b) <= 1e-9);
}

TEST_CASE("norm operators") {
  CHECK(NormOperator::identity(2).norm(std::vector<double>{3, 4}) == 5.0);
  auto id = std::make_shared<const SparseCholesky>(CsrMatrix::identity(3));
  const auto hm1 = NormOperator::inverse(NormKind::h_minus_1, id);
  const std::vector<double> w{1, -2, 2};
  CHECK(hm1.norm(w) == doctest::Approx(3.0));
  const auto diag = NormOperator::diagonal(NormKind::lumped_l2, {2, 3});
  CHECK(diag.inner(std::vector<double>{1, 1}, std::vector<double>{1, 1}) == 5.0);
  CHECK(parse_norm_kind("lumped-l2") == NormKind::lumped_l2);
  CHECK(parse_norm_kind("hminus1") == NormKind::h_minus_1);
  CHECK_FALSE(parse_norm_kind("h1"));
}
