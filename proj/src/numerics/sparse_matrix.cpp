#include "optomech/numerics/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "optomech/error.hpp"
#include "optomech/parallel.hpp"

namespace optomech::numerics {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_dense(const ComplexMatrix& dense, double drop_tol) {
  SparseMatrix s(dense.rows(), dense.cols());
  const double cut = drop_tol * max_abs(dense);
  for (std::size_t i = 0; i < dense.rows(); ++i) {
    for (std::size_t j = 0; j < dense.cols(); ++j) {
      const Complex v = dense(i, j);
      if (v == Complex{} || std::abs(v) <= cut) continue;
      s.col_idx_.push_back(j);
      s.values_.push_back(v);
    }
    s.row_ptr_[i + 1] = s.values_.size();
  }
  return s;
}

ComplexMatrix SparseMatrix::to_dense() const {
  ComplexMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) d(i, col_idx_[p]) += values_[p];
  return d;
}

SparseMatrix SparseMatrix::adjoint() const {
  SparseMatrix t(cols_, rows_);
  std::vector<std::size_t> count(cols_ + 1, 0);
  for (std::size_t c : col_idx_) ++count[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) count[c + 1] += count[c];
  t.row_ptr_ = count;
  t.col_idx_.resize(values_.size());
  t.values_.resize(values_.size());
  std::vector<std::size_t> fill(count.begin(), count.end() - 1);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const std::size_t dst = fill[col_idx_[p]]++;
      t.col_idx_[dst] = i;
      t.values_[dst] = std::conj(values_[p]);
    }
  return t;
}

SparseMatrix SparseMatrix::scaled(Complex s) const {
  SparseMatrix r = *this;
  for (auto& v : r.values_) v *= s;
  return r;
}

namespace {

void check_left(const ComplexMatrix& out, const SparseMatrix& a, const ComplexMatrix& x) {
  if (a.cols() != x.rows() || out.rows() != a.rows() || out.cols() != x.cols())
    throw DomainError("add_product: shape mismatch");
}

void check_right(const ComplexMatrix& out, const ComplexMatrix& x, const SparseMatrix& a) {
  if (x.cols() != a.cols() || out.rows() != x.rows() || out.cols() != a.rows())
    throw DomainError("add_product_adjoint: shape mismatch");
}

}  // namespace

void add_product(ComplexMatrix& out, Complex alpha, const SparseMatrix& a, const ComplexMatrix& x) {
  check_left(out, a, x);
  const std::size_t m = x.cols();
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& va = a.values();
  const Complex* px = x.data().data();
  Complex* po = out.data().data();
#pragma omp parallel for schedule(static) if (parallel_enabled() && a.nonzeros() * m > 65536)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.rows()); ++i) {
    Complex* orow = po + i * m;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) {
      const Complex coef = alpha * va[p];
      const Complex* xrow = px + ci[p] * m;
      for (std::size_t j = 0; j < m; ++j) orow[j] += coef * xrow[j];
    }
  }
}

void add_product_adjoint(ComplexMatrix& out, Complex alpha, const ComplexMatrix& x,
                         const SparseMatrix& a) {
  check_right(out, x, a);
  const std::size_t n = x.rows();
  const std::size_t xc = x.cols();
  const std::size_t oc = out.cols();
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& va = a.values();
  const Complex* px = x.data().data();
  Complex* po = out.data().data();
#pragma omp parallel for schedule(static) if (parallel_enabled() && a.nonzeros() * n > 65536)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const Complex* xrow = px + i * xc;
    Complex* orow = po + i * oc;
    for (std::size_t j = 0; j < a.rows(); ++j) {
      Complex acc{};
      for (std::size_t p = rp[j]; p < rp[j + 1]; ++p) acc += xrow[ci[p]] * std::conj(va[p]);
      orow[j] += alpha * acc;
    }
  }
}

ComplexMatrix sandwich(const SparseMatrix& a, const ComplexMatrix& x, const SparseMatrix& b) {
  ComplexMatrix ax(a.rows(), x.cols());
  add_product(ax, 1.0, a, x);
  ComplexMatrix r(a.rows(), b.rows());
  add_product_adjoint(r, 1.0, ax, b);
  return r;
}

namespace reference {

void add_product(ComplexMatrix& out, Complex alpha, const SparseMatrix& a, const ComplexMatrix& x) {
  check_left(out, a, x);
  const auto& rp = a.row_ptr();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      Complex acc{};
      for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) acc += a.values()[p] * x(a.col_idx()[p], j);
      out(i, j) += alpha * acc;
    }
}

void add_product_adjoint(ComplexMatrix& out, Complex alpha, const ComplexMatrix& x,
                         const SparseMatrix& a) {
  check_right(out, x, a);
  const ComplexMatrix dense_adj = adjoint(a.to_dense());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < dense_adj.cols(); ++j) {
      Complex acc{};
      for (std::size_t k = 0; k < x.cols(); ++k) acc += x(i, k) * dense_adj(k, j);
      out(i, j) += alpha * acc;
    }
}

}  // namespace reference

}  // namespace optomech::numerics
