#pragma once

#include <dimred/error.hpp>
#include <dimred/matrix.hpp>
#include <dimred/svd.hpp>

#include <algorithm>
#include <string>

namespace dimred {

// Rank-k truncation of an SVD. When k exceeds the numerical rank only the
// rank available triples are stored; k itself is kept for reporting and
// storage accounting.
struct TruncatedFactors {
  Matrix u_k;
  Vector sigma_k;
  Matrix v_k;
  std::size_t k = 0;
  Shape original_shape;
};

inline TruncatedFactors truncate(const SvdFactors& f, std::size_t k, Shape shape) {
  const std::size_t limit = std::min(shape.rows, shape.cols);
  if (k < 1 || k > limit) {
    throw Error(Errc::InvalidRank,
                "rank " + std::to_string(k) + " outside [1, " + std::to_string(limit) + "]");
  }
  if (f.u.rows() != shape.rows || f.v.rows() != shape.cols) {
    throw Error(Errc::ShapeMismatch, "factors do not belong to a " + to_string(shape) + " matrix");
  }
  const std::size_t kept = std::min(k, f.rank);
  TruncatedFactors t{Matrix(shape.rows, kept), Vector(kept), Matrix(shape.cols, kept), k, shape};
  for (std::size_t c = 0; c < kept; ++c) {
    t.sigma_k[c] = f.sigma[c];
    for (std::size_t i = 0; i < shape.rows; ++i) t.u_k(i, c) = f.u(i, c);
    for (std::size_t i = 0; i < shape.cols; ++i) t.v_k(i, c) = f.v(i, c);
  }
  return t;
}

inline Matrix reconstruct(const TruncatedFactors& t) {
  return scaled_outer(t.u_k, t.sigma_k, t.v_k);
}

/// Real values stored by the rank-k factors: k(m + n + 1).
inline std::size_t storage_cost(const TruncatedFactors& t) noexcept {
  return t.k * (t.original_shape.rows + t.original_shape.cols + 1);
}

} // namespace dimred
