#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace optomech::numerics {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major storage.
///
/// A default-constructed matrix is empty (0x0) and only serves as a
/// placeholder; every matrix built with explicit dimensions has rows, cols >= 1.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const Complex> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  void set_zero() noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale) noexcept;

  /// this += alpha * other
  void axpy(Complex alpha, const ComplexMatrix& other);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);

/// Matrix product using the OpenMP-parallel kernel.
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& a) noexcept;
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double one_norm(const ComplexMatrix& a) noexcept;

/// Hermiticity check, elementwise tolerance.
bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12) noexcept;

/// <x|A|x> style helpers on plain vectors.
std::vector<Complex> apply(const ComplexMatrix& a, std::span<const Complex> x);
Complex inner(std::span<const Complex> x, std::span<const Complex> y);  // sum conj(x_i) y_i

/// Serial reference kernels, kept for testing and benchmarking the parallel
/// versions.
namespace reference {
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
}  // namespace reference

}  // namespace optomech::numerics
