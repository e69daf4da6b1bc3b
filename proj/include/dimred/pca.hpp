#pragma once

#include <dimred/eigen.hpp>
#include <dimred/error.hpp>
#include <dimred/matrix.hpp>

#include <algorithm>
#include <string>
#include <utility>

namespace dimred {

// Rows are samples, columns are features, everywhere in this header.

struct Centered {
  Matrix data;
  Vector means;
};

/// Subtracts each column's mean. Returns the centered matrix and the means.
inline Centered mean_center(const Matrix& x) {
  Vector means(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) acc += x(i, j);
    means[j] = acc / static_cast<double>(x.rows());
  }
  Matrix c(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) c(i, j) = x(i, j) - means[j];
  return {std::move(c), std::move(means)};
}

/// Sample covariance X_c^T X_c / (n_samples - 1). The result is exactly symmetric.
inline Matrix covariance(const Matrix& xc) {
  if (xc.rows() < 2) {
    throw Error(Errc::InsufficientSamples,
                "covariance needs at least 2 samples, got " + std::to_string(xc.rows()));
  }
  const std::size_t n = xc.cols();
  const double divisor = static_cast<double>(xc.rows() - 1);
  Matrix c(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < xc.rows(); ++i) acc += xc(i, a) * xc(i, b);
      c(a, b) = acc / divisor;
      c(b, a) = c(a, b);
    }
  }
  return c;
}

class PcaModel {
public:
  PcaModel(Vector means, Matrix components, Vector spectrum, std::size_t n_samples)
      : means_(std::move(means)), components_(std::move(components)),
        spectrum_(std::move(spectrum)), n_samples_(n_samples) {}

  const Vector& means() const noexcept { return means_; }
  /// n_features x s; columns are the retained principal directions.
  const Matrix& components() const noexcept { return components_; }
  /// All n_features eigenvalues of the covariance, descending, clamped at 0.
  const Vector& spectrum() const noexcept { return spectrum_; }
  std::size_t n_samples() const noexcept { return n_samples_; }
  std::size_t n_features() const noexcept { return means_.size(); }
  std::size_t n_components() const noexcept { return components_.cols(); }

private:
  Vector means_;
  Matrix components_;
  Vector spectrum_;
  std::size_t n_samples_;
};

enum class Centering { Apply, Skip };

//
// Fits PCA with s retained components: center, form the covariance, run the
// Jacobi eigensolver and keep the leading s eigenvectors.
//
// Centering::Skip treats the raw matrix as if it were already centered (means
// recorded as zero). It exists to measure what the centering step buys.
//
inline PcaModel pca_fit(const Matrix& x, std::size_t s, Centering centering = Centering::Apply) {
  if (s < 1 || s > x.cols()) {
    throw Error(Errc::InvalidComponentCount, "component count " + std::to_string(s) +
                                                 " outside [1, " + std::to_string(x.cols()) + "]");
  }
  if (x.rows() < 2) {
    throw Error(Errc::InsufficientSamples,
                "PCA needs at least 2 samples, got " + std::to_string(x.rows()));
  }

  Centered centered = centering == Centering::Apply ? mean_center(x)
                                                    : Centered{x, Vector(x.cols(), 0.0)};
  const EigenDecomposition eig = sym_eig(covariance(centered.data));

  Vector spectrum(eig.values.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] = std::max(0.0, eig.values[i]);

  Matrix components(x.cols(), s);
  for (std::size_t i = 0; i < x.cols(); ++i)
    for (std::size_t j = 0; j < s; ++j) components(i, j) = eig.vectors(i, j);

  return PcaModel(std::move(centered.means), std::move(components), std::move(spectrum), x.rows());
}

/// Same fit restricted to the leading s components.
inline PcaModel retain(const PcaModel& model, std::size_t s) {
  if (s < 1 || s > model.n_components()) {
    throw Error(Errc::InvalidComponentCount,
                "component count " + std::to_string(s) + " outside [1, " +
                    std::to_string(model.n_components()) + "]");
  }
  Matrix components(model.n_features(), s);
  for (std::size_t i = 0; i < model.n_features(); ++i)
    for (std::size_t j = 0; j < s; ++j) components(i, j) = model.components()(i, j);
  return PcaModel(model.means(), std::move(components), model.spectrum(), model.n_samples());
}

/// Scores (x - means) * components, one row per sample.
inline Matrix project(const PcaModel& model, const Matrix& x) {
  if (x.cols() != model.n_features()) {
    throw Error(Errc::DimensionMismatch, "input has " + std::to_string(x.cols()) +
                                             " features, model expects " +
                                             std::to_string(model.n_features()));
  }
  const Matrix& q = model.components();
  Matrix scores(x.rows(), q.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t k = 0; k < q.cols(); ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < x.cols(); ++j) acc += (x(i, j) - model.means()[j]) * q(j, k);
      scores(i, k) = acc;
    }
  }
  return scores;
}

/// scores * components^T + means.
inline Matrix inverse_project(const PcaModel& model, const Matrix& scores) {
  const Matrix& q = model.components();
  if (scores.cols() != q.cols()) {
    throw Error(Errc::DimensionMismatch, "scores have " + std::to_string(scores.cols()) +
                                             " columns, model retains " +
                                             std::to_string(q.cols()));
  }
  Matrix x(scores.rows(), model.n_features());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    for (std::size_t j = 0; j < model.n_features(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < q.cols(); ++k) acc += scores(i, k) * q(j, k);
      x(i, j) = acc + model.means()[j];
    }
  }
  return x;
}

/// Each eigenvalue over the eigenvalue total, for the full spectrum.
inline Vector explained_variance_ratio(const PcaModel& model) {
  double total = 0.0;
  for (double v : model.spectrum()) total += v;
  if (!(total > 0.0)) {
    throw Error(Errc::DegenerateSpectrum, "total variance is zero (constant data)");
  }
  Vector ratio(model.spectrum().size());
  for (std::size_t i = 0; i < ratio.size(); ++i) ratio[i] = model.spectrum()[i] / total;
  return ratio;
}

} // namespace dimred
