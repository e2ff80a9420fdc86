#pragma once

// Dense complex matrix, the carrier for algebra elements and Hilbert-space
// operators. Row-major storage; all arithmetic routes through the kernel
// layer. Values are immutable by convention once handed to the algebra
// layers; every operation below returns a fresh matrix.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "rbc/errors.hpp"

namespace rbc {

using cd = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cd{0.0, 0.0}) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cd> data);
  ComplexMatrix(std::initializer_list<std::initializer_list<cd>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols);
  // E_ij: single 1 at (i, j)
  static ComplexMatrix unit(std::size_t n, std::size_t i, std::size_t j);
  static ComplexMatrix diagonal(const std::vector<cd>& entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  cd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  cd operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const cd* data() const { return data_.data(); }
  cd* data() { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  bool all_finite() const;

  ComplexMatrix operator+(const ComplexMatrix& other) const;
  ComplexMatrix operator-(const ComplexMatrix& other) const;
  ComplexMatrix operator*(const ComplexMatrix& other) const;
  ComplexMatrix operator*(cd scalar) const;
  ComplexMatrix operator-() const;

  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;

  cd trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  // Column-stacked vectorization: vec(a)[i + rows*j] = a(i, j).
  std::vector<cd> vec() const;
  static ComplexMatrix unvec(const std::vector<cd>& v, std::size_t rows,
                             std::size_t cols);

  ComplexMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows,
                      std::size_t ncols) const;
  void set_block(std::size_t row0, std::size_t col0, const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cd> data_;
};

inline ComplexMatrix operator*(cd scalar, const ComplexMatrix& m) {
  return m * scalar;
}

// Conjugate transpose; (a*)* == a exactly.
ComplexMatrix adjoint(const ComplexMatrix& a);

// Largest singular value. Satisfies the C*-identity |a* a| = |a|^2 to
// roundoff; computed from a full eigendecomposition of a* a.
double operator_norm(const ComplexMatrix& a);

// Block-diagonal embedding of the parts; the norm of the result is the max
// of the part norms.
ComplexMatrix direct_sum_embed(const std::vector<ComplexMatrix>& parts);

// All products of d and d* of length 1..max_len, enumerated by length and
// then lexicographically with d before d*.
std::vector<ComplexMatrix> cstar_words(const ComplexMatrix& d,
                                       std::size_t max_len);

// max |a(i,j) - b(i,j)|, shapes must agree
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace rbc
