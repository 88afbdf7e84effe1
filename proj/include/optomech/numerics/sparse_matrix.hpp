#pragma once

#include <cstddef>
#include <vector>

#include "optomech/numerics/complex_matrix.hpp"

namespace optomech::numerics {

/// Compressed-sparse-row complex matrix. Used for the structured operators
/// (ladder operators, sector propagators) that act on dense density blocks.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  /// Keeps entries with |a_ij| > drop_tol * max|a|.
  static SparseMatrix from_dense(const ComplexMatrix& dense, double drop_tol = 0.0);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const noexcept { return col_idx_; }
  const std::vector<Complex>& values() const noexcept { return values_; }

  ComplexMatrix to_dense() const;
  SparseMatrix adjoint() const;
  SparseMatrix scaled(Complex s) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<Complex> values_;
};

/// out += alpha * A * X
void add_product(ComplexMatrix& out, Complex alpha, const SparseMatrix& a, const ComplexMatrix& x);

/// out += alpha * X * A^dagger
void add_product_adjoint(ComplexMatrix& out, Complex alpha, const ComplexMatrix& x,
                         const SparseMatrix& a);

/// A * X * B^dagger, the workhorse of sector propagation and jump terms.
ComplexMatrix sandwich(const SparseMatrix& a, const ComplexMatrix& x, const SparseMatrix& b);

namespace reference {
void add_product(ComplexMatrix& out, Complex alpha, const SparseMatrix& a, const ComplexMatrix& x);
void add_product_adjoint(ComplexMatrix& out, Complex alpha, const ComplexMatrix& x,
                         const SparseMatrix& a);
}  // namespace reference

}  // namespace optomech::numerics
