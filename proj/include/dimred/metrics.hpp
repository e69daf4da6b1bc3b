#pragma once

#include <dimred/error.hpp>
#include <dimred/lowrank.hpp>
#include <dimred/matrix.hpp>
#include <dimred/pca.hpp>
#include <dimred/random.hpp>
#include <dimred/svd.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dimred {

enum class Method { Pca, Svd };

constexpr std::string_view to_string(Method m) noexcept { return m == Method::Pca ? "pca" : "svd"; }

struct ErrorPair {
  double absolute = 0.0;
  double relative = 0.0;
};

/// Frobenius distance between x and its approximation, absolute and relative to ||x||_F.
inline ErrorPair reconstruction_error(const Matrix& x, const Matrix& x_hat) {
  if (x.shape() != x_hat.shape()) {
    throw Error(Errc::ShapeMismatch, "reference is " + to_string(x.shape()) +
                                         ", approximation is " + to_string(x_hat.shape()));
  }
  const double reference = frobenius_norm(x);
  if (reference == 0.0) {
    throw Error(Errc::ZeroReference, "relative error undefined for a zero reference matrix");
  }
  const double absolute = frobenius_norm(x - x_hat);
  return {absolute, absolute / reference};
}

/// Fraction of sum(sigma^2) carried by the first k singular values.
inline double energy_captured(const Vector& sigma, std::size_t k) {
  if (k < 1 || k > sigma.size()) {
    throw Error(Errc::InvalidRank,
                "rank " + std::to_string(k) + " outside [1, " + std::to_string(sigma.size()) + "]");
  }
  double head = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double e = sigma[i] * sigma[i];
    total += e;
    if (i < k) head += e;
  }
  if (total == 0.0) throw Error(Errc::ZeroEnergy, "all singular values are zero");
  return head / total;
}

struct BenchRow {
  std::size_t k = 0;
  double reconstruction_error = 0.0;
  double relative_error = 0.0;
  double energy_captured = 0.0;
  double explained_variance = 0.0;
  double runtime_seconds = 0.0;
  std::size_t stored_values = 0;
};

//
// One benchmark run. `total_energy` is the quantity the energy and
// explained-variance columns are fractions of (sum sigma^2 for svd, sum of
// the covariance spectrum for pca); it is what per-channel reports are
// weighted by when aggregated.
//
struct BenchReport {
  Method method = Method::Svd;
  Shape shape;
  double total_energy = 0.0;
  double reference_norm = 0.0;
  std::vector<BenchRow> rows;
};

namespace detail {

// Minimum of three timed runs of `fn`.
template <typename Fn>
double min_runtime(Fn&& fn) {
  double best = 0.0;
  for (int rep = 0; rep < 3; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    best = rep == 0 ? took.count() : std::min(best, took.count());
  }
  return best;
}

inline std::vector<std::size_t> checked_ranks(std::span<const std::size_t> ks, Shape shape) {
  if (ks.empty()) throw Error(Errc::EmptyRankList, "no ranks requested");
  const std::size_t limit = std::min(shape.rows, shape.cols);
  std::vector<std::size_t> sorted(ks.begin(), ks.end());
  for (std::size_t k : sorted) {
    if (k < 1 || k > limit) {
      throw Error(Errc::InvalidRank,
                  "rank " + std::to_string(k) + " outside [1, " + std::to_string(limit) + "]");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return sorted;
}

} // namespace detail

/// PCA with s components stores scores (m x s), directions (n x s) and the means (n).
inline std::size_t pca_storage_cost(Shape shape, std::size_t s) noexcept {
  return s * (shape.rows + shape.cols) + shape.cols;
}

//
// Decomposes x once, then truncates and reconstructs at every requested
// rank. Ranks are reported in ascending order with duplicates removed.
// runtime_seconds is the decomposition time spread evenly over the ranks
// plus the rank's own truncate+reconstruct time, each the minimum of three
// runs.
//
inline BenchReport run_benchmark(const Matrix& x, Method method, std::span<const std::size_t> ks) {
  const std::vector<std::size_t> ranks = detail::checked_ranks(ks, x.shape());
  const double reference = frobenius_norm(x);
  if (reference == 0.0) {
    throw Error(Errc::ZeroReference, "relative error undefined for a zero input matrix");
  }

  BenchReport report;
  report.method = method;
  report.shape = x.shape();
  report.reference_norm = reference;
  const double share = 1.0 / static_cast<double>(ranks.size());

  if (method == Method::Svd) {
    SvdFactors f;
    const double decompose = detail::min_runtime([&] { f = svd(x); });
    if (f.rank == 0) throw Error(Errc::ZeroEnergy, "all singular values are zero");
    for (double s : f.sigma) report.total_energy += s * s;

    for (std::size_t k : ranks) {
      TruncatedFactors t;
      Matrix x_hat;
      const double rebuild = detail::min_runtime([&] {
        t = truncate(f, k, x.shape());
        x_hat = reconstruct(t);
      });
      const ErrorPair err = reconstruction_error(x, x_hat);
      const double energy = energy_captured(f.sigma, std::min(k, f.rank));
      report.rows.push_back({k, err.absolute, err.relative, energy, energy,
                             decompose * share + rebuild, storage_cost(t)});
    }
  } else {
    std::optional<PcaModel> model;
    const double decompose = detail::min_runtime([&] { model = pca_fit(x, x.cols()); });
    const Vector ratio = explained_variance_ratio(*model);
    for (double v : model->spectrum()) report.total_energy += v;

    for (std::size_t k : ranks) {
      Matrix x_hat;
      const double rebuild = detail::min_runtime([&] {
        const PcaModel reduced = retain(*model, k);
        x_hat = inverse_project(reduced, project(reduced, x));
      });
      const ErrorPair err = reconstruction_error(x, x_hat);
      double explained = 0.0;
      for (std::size_t i = 0; i < k; ++i) explained += ratio[i];
      explained = std::min(explained, 1.0);
      report.rows.push_back({k, err.absolute, err.relative, explained, explained,
                             decompose * share + rebuild, pca_storage_cost(x.shape(), k)});
    }
  }
  return report;
}

struct Compression {
  Matrix reconstruction;
  ErrorPair error;
  double energy = 0.0;
  // What `energy` is a fraction of: sum sigma^2 (svd) or the spectrum total (pca).
  double total_energy = 0.0;
};

/// Rank-k approximation of x by either method, with its error and captured energy.
inline Compression compress(const Matrix& x, Method method, std::size_t k) {
  const std::size_t limit = std::min(x.rows(), x.cols());
  if (k < 1 || k > limit) {
    throw Error(Errc::InvalidRank,
                "rank " + std::to_string(k) + " outside [1, " + std::to_string(limit) + "]");
  }
  Compression out;
  if (method == Method::Svd) {
    const SvdFactors f = svd(x);
    if (f.rank == 0) throw Error(Errc::ZeroEnergy, "all singular values are zero");
    out.reconstruction = reconstruct(truncate(f, k, x.shape()));
    out.energy = energy_captured(f.sigma, std::min(k, f.rank));
    for (double sv : f.sigma) out.total_energy += sv * sv;
  } else {
    const PcaModel model = pca_fit(x, k);
    const Vector ratio = explained_variance_ratio(model);
    for (std::size_t i = 0; i < k; ++i) out.energy += ratio[i];
    out.energy = std::min(out.energy, 1.0);
    for (double v : model.spectrum()) out.total_energy += v;
    out.reconstruction = inverse_project(model, project(model, x));
  }
  out.error = reconstruction_error(x, out.reconstruction);
  return out;
}

//
// Combines per-channel reports over identical ranks into one report for the
// stacked planes: errors add in quadrature, energies are weighted by each
// channel's total, runtimes and storage add.
//
inline BenchReport aggregate_reports(std::span<const BenchReport> parts) {
  if (parts.empty()) throw Error(Errc::ShapeMismatch, "nothing to aggregate");
  BenchReport out;
  out.method = parts[0].method;
  out.shape = parts[0].shape;
  double reference_sq = 0.0;
  for (const auto& p : parts) {
    if (p.rows.size() != parts[0].rows.size() || p.method != out.method) {
      throw Error(Errc::ShapeMismatch, "reports do not cover the same ranks and method");
    }
    reference_sq += p.reference_norm * p.reference_norm;
    out.total_energy += p.total_energy;
  }
  out.reference_norm = std::sqrt(reference_sq);

  for (std::size_t r = 0; r < parts[0].rows.size(); ++r) {
    BenchRow row;
    row.k = parts[0].rows[r].k;
    double abs_sq = 0.0;
    for (const auto& p : parts) {
      const BenchRow& pr = p.rows[r];
      if (pr.k != row.k) throw Error(Errc::ShapeMismatch, "reports do not cover the same ranks");
      abs_sq += pr.reconstruction_error * pr.reconstruction_error;
      if (out.total_energy > 0.0) {
        row.energy_captured += pr.energy_captured * p.total_energy / out.total_energy;
        row.explained_variance += pr.explained_variance * p.total_energy / out.total_energy;
      }
      row.runtime_seconds += pr.runtime_seconds;
      row.stored_values += pr.stored_values;
    }
    row.reconstruction_error = std::sqrt(abs_sq);
    row.relative_error = row.reconstruction_error / out.reference_norm;
    out.rows.push_back(row);
  }
  return out;
}

struct CenteringShift {
  double svd_shift = 0.0;
  double pca_shift = 0.0;
};

//
// How much each method's output moves when the centering step is toggled,
// both measured relative to ||x||_F.
//
// svd_shift compares the rank-k SVD reconstruction of x with the rank-k
// reconstruction of the centered matrix plus the means added back. pca_shift
// compares rank-k PCA scores with and without centering.
//
inline CenteringShift centering_sensitivity(const Matrix& x, std::size_t k) {
  const std::size_t limit = std::min(x.rows(), x.cols());
  if (k < 1 || k > limit) {
    throw Error(Errc::InvalidRank,
                "rank " + std::to_string(k) + " outside [1, " + std::to_string(limit) + "]");
  }
  const double reference = frobenius_norm(x);
  if (reference == 0.0) throw Error(Errc::ZeroReference, "input matrix is zero");

  const Matrix raw = reconstruct(truncate(svd(x), k, x.shape()));
  const Centered c = mean_center(x);
  Matrix recentered = reconstruct(truncate(svd(c.data), k, x.shape()));
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) recentered(i, j) += c.means[j];

  const Matrix scores_centered = project(pca_fit(x, k, Centering::Apply), x);
  const Matrix scores_raw = project(pca_fit(x, k, Centering::Skip), x);

  return {frobenius_norm(raw - recentered) / reference,
          frobenius_norm(scores_centered - scores_raw) / reference};
}

struct StabilityReport {
  double condition_target = 1.0;
  std::uint64_t seed = default_seed;
  Vector sigma_true;
  Vector sigma_via_svd;
  Vector sigma_via_covariance_eig;
  double rel_err_svd = 0.0;
  double rel_err_cov = 0.0;
};

//
// Builds X = U diag(sigma) V^T with 2n samples and n features, sigma
// log-spaced from 1 down to 1/cond, and U's columns orthogonal to the
// all-ones vector so X already has zero column means. Sigma is then
// recovered directly by SVD and through the covariance eigenvalues
// (sigma_i = sqrt(lambda_i (n_samples - 1))). Errors are relative errors on
// the smallest singular value.
//
inline StabilityReport stability_experiment(std::size_t n, double cond,
                                            std::uint64_t seed = default_seed) {
  if (n < 2) throw Error(Errc::InvalidRank, "stability experiment needs n >= 2");
  if (!(cond >= 1.0) || !std::isfinite(cond)) {
    throw Error(Errc::InvalidCondition, "condition target must be a finite value >= 1");
  }
  Rng rng(seed);
  const std::size_t samples = 2 * n;

  Matrix u = mean_center(random_gaussian(samples, n, rng)).data;
  orthonormalize_columns(u);
  const Matrix v = random_orthonormal(n, n, rng);

  StabilityReport rep;
  rep.condition_target = cond;
  rep.seed = seed;
  rep.sigma_true = Vector(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.sigma_true[i] =
        std::pow(cond, -static_cast<double>(i) / static_cast<double>(n - 1));
  }
  const Matrix x = scaled_outer(u, rep.sigma_true, v);

  const SvdFactors f = svd(x);
  rep.sigma_via_svd = Vector(n, 0.0);
  for (std::size_t i = 0; i < f.rank; ++i) rep.sigma_via_svd[i] = f.sigma[i];

  const EigenDecomposition eig = sym_eig(covariance(mean_center(x).data));
  rep.sigma_via_covariance_eig = Vector(n);
  const double scale = static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < n; ++i) {
    rep.sigma_via_covariance_eig[i] = std::sqrt(std::max(0.0, eig.values[i]) * scale);
  }

  const double smallest = rep.sigma_true[n - 1];
  rep.rel_err_svd = std::abs(rep.sigma_via_svd[n - 1] - smallest) / smallest;
  rep.rel_err_cov = std::abs(rep.sigma_via_covariance_eig[n - 1] - smallest) / smallest;
  return rep;
}

} // namespace dimred
