#pragma once

#include <dimred/error.hpp>
#include <dimred/matrix.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace dimred {

//
// Thin SVD: x ~= u * diag(sigma) * v^T with `rank` retained triples.
//
// u is m x rank and v is n x rank, both with orthonormal columns; sigma is
// descending and strictly above the numerical-rank threshold.
//
struct SvdFactors {
  Matrix u;
  Vector sigma;
  Matrix v;
  std::size_t rank = 0;
  int sweeps = 0;
};

struct SvdOptions {
  int max_sweeps = 60;
};

inline std::size_t rank_of(const SvdFactors& f) noexcept { return f.rank; }

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline void rotate_pair(std::vector<double>& a, std::vector<double>& b, double c, double s) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    const double bi = b[i];
    a[i] = c * ai - s * bi;
    b[i] = s * ai + c * bi;
  }
}

// One-sided (Hestenes) Jacobi on a tall matrix given by its columns.
// On return `cols` holds x*v and `vcols` the accumulated rotations.
inline int hestenes_sweeps(std::vector<std::vector<double>>& cols,
                           std::vector<std::vector<double>>& vcols, std::size_t m, int max_sweeps) {
  const std::size_t n = cols.size();
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = static_cast<double>(m) * eps;
  // Columns below eps * ||x||_F are roundoff; they fall under the rank
  // threshold anyway, and rotating them against each other can cycle forever.
  double frob2 = 0.0;
  for (const auto& c : cols) frob2 += dot(c, c);
  const double negligible = eps * eps * frob2;

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double gamma = dot(cols[i], cols[j]);
        if (gamma == 0.0) continue;
        const double alpha = dot(cols[i], cols[i]);
        const double beta = dot(cols[j], cols[j]);
        if (alpha <= negligible || beta <= negligible) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;

        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate_pair(cols[i], cols[j], c, s);
        rotate_pair(vcols[i], vcols[j], c, s);
      }
    }
    if (!rotated) return sweep;
  }
  throw Error(Errc::NoConvergence,
              "one-sided Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");
}

inline SvdFactors svd_tall(const Matrix& x, const SvdOptions& opts) {
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();

  std::vector<std::vector<double>> cols(n, std::vector<double>(m));
  std::vector<std::vector<double>> vcols(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) cols[j][i] = x(i, j);
    vcols[j][j] = 1.0;
  }

  const int sweeps = hestenes_sweeps(cols, vcols, m, opts.max_sweeps);

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(dot(cols[j], cols[j]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return norms[l] > norms[r]; });

  const double sigma_max = n == 0 ? 0.0 : norms[order[0]];
  const double threshold =
      static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon() * sigma_max;
  std::size_t rank = 0;
  while (rank < n && norms[order[rank]] > threshold) ++rank;

  SvdFactors out{Matrix(m, rank), Vector(rank), Matrix(n, rank), rank, sweeps};
  for (std::size_t k = 0; k < rank; ++k) {
    const std::size_t src = order[k];
    const double sigma = norms[src];
    out.sigma[k] = sigma;
    for (std::size_t i = 0; i < m; ++i) out.u(i, k) = cols[src][i] / sigma;
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = vcols[src][i];
  }
  return out;
}

} // namespace detail

//
// Thin SVD of any real matrix via one-sided Jacobi orthogonalization.
//
// Wide inputs are decomposed through their transpose so the iteration always
// runs on the tall orientation. Singular values at or below
// max(m,n) * eps * sigma_max are dropped together with their vectors. Each
// column of v is signed so its dominant entry is non-negative, and the
// matching column of u follows.
//
inline SvdFactors svd(const Matrix& x, const SvdOptions& opts = {}) {
  SvdFactors f;
  if (x.rows() >= x.cols()) {
    f = detail::svd_tall(x, opts);
  } else {
    f = detail::svd_tall(transpose(x), opts);
    std::swap(f.u, f.v);
  }

  for (std::size_t k = 0; k < f.rank; ++k) {
    const std::vector<double> col = f.v.column(k);
    if (col[detail::dominant_index(col)] < 0.0) {
      for (std::size_t i = 0; i < f.v.rows(); ++i) f.v(i, k) = -f.v(i, k);
      for (std::size_t i = 0; i < f.u.rows(); ++i) f.u(i, k) = -f.u(i, k);
    }
  }
  return f;
}

} // namespace dimred
