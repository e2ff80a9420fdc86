#include "rbc/matrix.hpp"

#include <cmath>
#include <string>

#include "rbc/kernels.hpp"

namespace rbc {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(op) + ": shape mismatch (" +
                            std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()) + ")");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cd> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionMismatch("matrix data size does not match rows*cols");
  }
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<cd>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw DimensionMismatch("ragged initializer for matrix");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::unit(std::size_t n, std::size_t i,
                                  std::size_t j) {
  ComplexMatrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cd>& entries) {
  ComplexMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const cd& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& other) const {
  require_same_shape(*this, other, "add");
  ComplexMatrix out(rows_, cols_);
  kernels::axpby(1.0, data(), 1.0, other.data(), out.data(), size());
  return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& other) const {
  require_same_shape(*this, other, "sub");
  ComplexMatrix out(rows_, cols_);
  kernels::axpby(1.0, data(), -1.0, other.data(), out.data(), size());
  return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& other) const {
  if (cols_ != other.rows_) {
    throw DimensionMismatch("matmul: inner dimensions disagree (" +
                            std::to_string(cols_) + " vs " +
                            std::to_string(other.rows_) + ")");
  }
  ComplexMatrix out(rows_, other.cols_);
  kernels::matmul(data(), other.data(), out.data(), rows_, cols_, other.cols_);
  return out;
}

ComplexMatrix ComplexMatrix::operator*(cd scalar) const {
  ComplexMatrix out(rows_, cols_);
  kernels::scale(scalar, data(), out.data(), size());
  return out;
}

ComplexMatrix ComplexMatrix::operator-() const { return *this * cd{-1.0}; }

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < size(); ++i) out.data()[i] = std::conj(data_[i]);
  return out;
}

cd ComplexMatrix::trace() const {
  cd t = 0.0;
  const std::size_t n = rows_ < cols_ ? rows_ : cols_;
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  return std::sqrt(kernels::norm2sq(data(), size()));
}

double ComplexMatrix::max_abs() const {
  double best = 0.0;
  for (const cd& z : data_) best = std::max(best, std::abs(z));
  return best;
}

std::vector<cd> ComplexMatrix::vec() const {
  std::vector<cd> v(size());
  for (std::size_t j = 0; j < cols_; ++j) {
    for (std::size_t i = 0; i < rows_; ++i) v[i + rows_ * j] = (*this)(i, j);
  }
  return v;
}

ComplexMatrix ComplexMatrix::unvec(const std::vector<cd>& v, std::size_t rows,
                                   std::size_t cols) {
  if (v.size() != rows * cols) {
    throw DimensionMismatch("unvec: vector length does not match shape");
  }
  ComplexMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = v[i + rows * j];
  }
  return m;
}

ComplexMatrix ComplexMatrix::block(std::size_t row0, std::size_t col0,
                                   std::size_t nrows,
                                   std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) {
    throw DimensionMismatch("block: out of range");
  }
  ComplexMatrix out(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) {
      out(i, j) = (*this)(row0 + i, col0 + j);
    }
  }
  return out;
}

void ComplexMatrix::set_block(std::size_t row0, std::size_t col0,
                              const ComplexMatrix& b) {
  if (row0 + b.rows() > rows_ || col0 + b.cols() > cols_) {
    throw DimensionMismatch("set_block: out of range");
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      (*this)(row0 + i, col0 + j) = b(i, j);
    }
  }
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(j, i) = std::conj(a(i, j));
    }
  }
  return out;
}

ComplexMatrix direct_sum_embed(const std::vector<ComplexMatrix>& parts) {
  if (parts.empty()) throw InputError("direct_sum_embed: empty part list");
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (!p.is_square()) {
      throw DimensionMismatch("direct_sum_embed: parts must be square");
    }
    total += p.rows();
  }
  ComplexMatrix out(total, total);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    out.set_block(offset, offset, p);
    offset += p.rows();
  }
  return out;
}

std::vector<ComplexMatrix> cstar_words(const ComplexMatrix& d,
                                       std::size_t max_len) {
  if (!d.is_square()) throw DimensionMismatch("cstar_words: d must be square");
  if (max_len < 1) throw InputError("cstar_words: max_len must be >= 1");
  const ComplexMatrix dstar = adjoint(d);
  std::vector<ComplexMatrix> words;
  // products of the previous length, in enumeration order
  std::vector<ComplexMatrix> prev = {ComplexMatrix::identity(d.rows())};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<ComplexMatrix> cur;
    cur.reserve(prev.size() * 2);
    for (const auto& w : prev) {
      cur.push_back(w * d);
      cur.push_back(w * dstar);
    }
    words.insert(words.end(), cur.begin(), cur.end());
    prev = std::move(cur);
  }
  return words;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    best = std::max(best, std::abs(a.data()[i] - b.data()[i]));
  }
  return best;
}

}  // namespace rbc
