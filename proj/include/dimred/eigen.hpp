#pragma once

#include <dimred/error.hpp>
#include <dimred/matrix.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace dimred {

/// Eigenvectors are the columns of `vectors`; `values` is sorted descending.
struct EigenDecomposition {
  Matrix vectors;
  Vector values;
  int sweeps = 0;
};

struct JacobiOptions {
  double symmetry_tolerance = 1e-9;
  double relative_off_tolerance = 1e-14;
  int max_sweeps = 60;
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double acc = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = p + 1; q < a.cols(); ++q) acc += a(p, q) * a(p, q);
  return std::sqrt(2.0 * acc);
}

// Applies the rotation that annihilates a(p,q) to both sides of `a` and
// accumulates it into the columns of `v`.
inline void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

} // namespace detail

//
// Symmetric eigendecomposition by cyclic-by-row Jacobi sweeps.
//
// The input is checked for symmetry (scale-aware, per entry), symmetrized as
// (S + S^T)/2 and iterated until the off-diagonal Frobenius norm drops below
// relative_off_tolerance * ||S||_F. Eigenpairs are stable-sorted by
// descending eigenvalue and each eigenvector is signed so that its dominant
// entry is non-negative.
//
inline EigenDecomposition sym_eig(const Matrix& s, const JacobiOptions& opts = {}) {
  if (s.rows() != s.cols()) {
    throw Error(Errc::NotSquare, "eigendecomposition of " + to_string(s.shape()));
  }
  const std::size_t n = s.rows();
  const double sym_tol = opts.symmetry_tolerance * std::max(1.0, max_abs(s));

  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(s(i, j) - s(j, i)) > sym_tol) {
        throw Error(Errc::NotSymmetric, "entries (" + std::to_string(i) + "," + std::to_string(j) +
                                            ") and its mirror differ by more than tolerance");
      }
      a(i, j) = 0.5 * (s(i, j) + s(j, i));
    }
  }

  const double stop = opts.relative_off_tolerance * frobenius_norm(a);
  Matrix v = Matrix::identity(n);

  int sweeps = 0;
  while (detail::off_diagonal_norm(a) > stop) {
    if (sweeps == opts.max_sweeps) {
      throw Error(Errc::NoConvergence,
                  "Jacobi iteration did not converge in " + std::to_string(opts.max_sweeps) + " sweeps");
    }
    ++sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (a(p, q) != 0.0) detail::jacobi_rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return a(l, l) > a(r, r); });

  EigenDecomposition out{Matrix(n, n), Vector(n), sweeps};
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.values[c] = a(src, src);
    std::vector<double> col = v.column(src);
    const double sign = col[detail::dominant_index(col)] < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = sign * col[r];
  }
  return out;
}

} // namespace dimred
