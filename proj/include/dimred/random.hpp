#pragma once

#include <dimred/error.hpp>
#include <dimred/matrix.hpp>

#include <cmath>
#include <cstdint>
#include <random>

namespace dimred {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t default_seed = 42;

inline Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline Matrix random_uniform(std::size_t rows, std::size_t cols, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

/// Modified Gram-Schmidt with one reorthogonalization pass, in place.
inline void orthonormalize_columns(Matrix& a) {
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < j; ++p) {
        double proj = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) proj += a(i, p) * a(i, j);
        for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) -= proj * a(i, p);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) norm += a(i, j) * a(i, j);
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error(Errc::NoConvergence, "dependent columns in orthonormalization");
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) /= norm;
  }
}

/// rows x cols with orthonormal columns (cols <= rows), Haar-like via Gaussian + Gram-Schmidt.
inline Matrix random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix q = random_gaussian(rows, cols, rng);
  orthonormalize_columns(q);
  return q;
}

} // namespace dimred
