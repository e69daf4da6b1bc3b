#pragma once

#include <dimred/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dimred {

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  friend bool operator==(const Shape&, const Shape&) = default;
};

inline std::string to_string(Shape s) {
  return std::to_string(s.rows) + "x" + std::to_string(s.cols);
}

namespace detail {

inline void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(Errc::NonFinite, "matrix and vector elements must be finite");
    }
  }
}

} // namespace detail

//
// Dense real vector. Used for feature means and for eigen/singular value
// sequences. A zero-length vector is allowed so that a rank-0 factorization
// can be represented.
//
class Vector {
public:
  Vector() = default;

  explicit Vector(std::size_t len, double fill = 0.0) : data_(len, fill) {
    detail::require_finite(data_);
  }

  explicit Vector(std::vector<double> data) : data_(std::move(data)) {
    detail::require_finite(data_);
  }

  Vector(std::initializer_list<double> values) : data_(values) {
    detail::require_finite(data_);
  }

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> values() const noexcept { return data_; }

  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  friend bool operator==(const Vector&, const Vector&) = default;

private:
  std::vector<double> data_;
};

//
// Dense real matrix in row-major order: element (i,j) lives at i*cols + j.
//
// Constructors reject non-finite input. A matrix with a zero extent is only
// produced by factorizations of rank 0 (thin U/V with no columns).
//
class Matrix {
public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    detail::require_finite(data_);
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(Errc::DimensionMismatch,
                  "data length " + std::to_string(data_.size()) + " does not match shape " +
                      to_string(shape()));
    }
    detail::require_finite(data_);
  }

  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) {
        throw Error(Errc::DimensionMismatch, "ragged initializer rows");
      }
      data_.insert(data_.end(), row.begin(), row.end());
    }
    detail::require_finite(data_);
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Shape shape() const noexcept { return {rows_, cols_}; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }
  std::span<double> row(std::size_t i) { return std::span<double>(data_).subspan(i * cols_, cols_); }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  std::span<const double> values() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Standard product; the inner index is summed in ascending order.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(Errc::DimensionMismatch,
                "cannot multiply " + to_string(a.shape()) + " by " + to_string(b.shape()));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < a.cols(); ++p) acc += a(i, p) * b(p, j);
      c(i, j) = acc;
    }
  }
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline double frobenius_norm(const Matrix& a) {
  double acc = 0.0;
  for (double v : a.values()) acc += v * v;
  return std::sqrt(acc);
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.shape() != b.shape()) {
    throw Error(Errc::ShapeMismatch,
                "cannot subtract " + to_string(b.shape()) + " from " + to_string(a.shape()));
  }
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.shape() != b.shape()) {
    throw Error(Errc::ShapeMismatch,
                "cannot add " + to_string(b.shape()) + " to " + to_string(a.shape()));
  }
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

inline double trace(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(Errc::NotSquare, "trace of " + to_string(a.shape()));
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, i);
  return acc;
}

/// Largest absolute element, 0 for an empty matrix.
inline double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

/// a * diag(d) * b^T, the shape every factorization in this library reconstructs through.
inline Matrix scaled_outer(const Matrix& a, const Vector& d, const Matrix& b) {
  if (a.cols() != d.size() || b.cols() != d.size()) {
    throw Error(Errc::DimensionMismatch, "factor widths " + std::to_string(a.cols()) + ", " +
                                             std::to_string(d.size()) + ", " +
                                             std::to_string(b.cols()) + " disagree");
  }
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < d.size(); ++p) acc += a(i, p) * d[p] * b(j, p);
      c(i, j) = acc;
    }
  }
  return c;
}

namespace detail {

// Index of the first entry whose magnitude is within a relative 1e-12 of the
// largest one. The slack keeps the sign convention stable when two entries
// tie in exact arithmetic but differ in the last bit.
inline std::size_t dominant_index(std::span<const double> v) {
  double largest = 0.0;
  for (double x : v) largest = std::max(largest, std::abs(x));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= largest * (1.0 - 1e-12)) return i;
  }
  return 0;
}

} // namespace detail

} // namespace dimred
