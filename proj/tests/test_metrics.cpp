#include <dimred/metrics.hpp>
#include <dimred/report.hpp>

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <vector>

using namespace dimred;

namespace {

const Matrix kSampleGray{{100, 50, 25}, {200, 0, 240}, {0, 47, 120}};

template <typename Fn>
void expect_code(Errc code, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

void expect_monotone(const BenchReport& r) {
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    EXPECT_LT(r.rows[i - 1].k, r.rows[i].k);
    EXPECT_LE(r.rows[i].reconstruction_error, r.rows[i - 1].reconstruction_error * (1 + 1e-12) + 1e-12);
    EXPECT_GE(r.rows[i].energy_captured, r.rows[i - 1].energy_captured - 1e-15);
  }
  for (const auto& row : r.rows) {
    EXPECT_GE(row.reconstruction_error, 0.0);
    EXPECT_GE(row.relative_error, 0.0);
    EXPECT_LE(row.relative_error, 1.0 + 1e-12);
    EXPECT_GE(row.energy_captured, 0.0);
    EXPECT_LE(row.energy_captured, 1.0);
    EXPECT_GE(row.explained_variance, 0.0);
    EXPECT_LE(row.explained_variance, 1.0);
    EXPECT_GE(row.runtime_seconds, 0.0);
  }
}

} // namespace

TEST(ReconstructionError, Examples) {
  const ErrorPair same = reconstruction_error(kSampleGray, kSampleGray);
  EXPECT_EQ(same.absolute, 0.0);
  EXPECT_EQ(same.relative, 0.0);

  // Residual of the rank-1 truncation of diag(3,1) is the discarded sigma = 1.
  const Matrix d{{3, 0}, {0, 1}};
  const ErrorPair e = reconstruction_error(d, reconstruct(truncate(svd(d), 1, d.shape())));
  EXPECT_NEAR(e.absolute, 1.0, 1e-14);
  EXPECT_NEAR(e.relative, 1.0 / std::sqrt(10.0), 1e-14);

  expect_code(Errc::ShapeMismatch, [] { reconstruction_error(Matrix(2, 2), Matrix(2, 3)); });
  expect_code(Errc::ZeroReference, [] { reconstruction_error(Matrix(2, 2), Matrix(2, 2)); });
}

TEST(EnergyCaptured, Examples) {
  const Vector sigma{std::sqrt(45.0), std::sqrt(5.0)};
  EXPECT_NEAR(energy_captured(sigma, 1), 45.0 / 50.0, 1e-15);
  EXPECT_EQ(energy_captured(sigma, 2), 1.0);
  expect_code(Errc::ZeroEnergy, [] { energy_captured(Vector{0, 0}, 1); });
  expect_code(Errc::InvalidRank, [&] { energy_captured(sigma, 0); });
  expect_code(Errc::InvalidRank, [&] { energy_captured(sigma, 3); });
}

TEST(RunBenchmark, SampleMatrixSvd) {
  const std::vector<std::size_t> ks{1, 2, 3};
  const BenchReport r = run_benchmark(kSampleGray, Method::Svd, ks);
  ASSERT_EQ(r.rows.size(), 3u);
  expect_monotone(r);
  EXPECT_LE(r.rows[2].relative_error, 1e-9);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.stored_values, row.k * (3 + 3 + 1));
    EXPECT_NEAR(row.energy_captured, 1.0 - row.relative_error * row.relative_error, 1e-8);
    EXPECT_EQ(row.energy_captured, row.explained_variance);
  }
}

TEST(RunBenchmark, RankOneRecoveredExactly) {
  const std::vector<std::size_t> ks{1};
  const BenchReport r = run_benchmark(Matrix{{1, 2, 3}, {2, 4, 6}}, Method::Svd, ks);
  EXPECT_LE(r.rows[0].relative_error, 1e-9);
}

TEST(RunBenchmark, Errors) {
  const std::vector<std::size_t> none;
  expect_code(Errc::EmptyRankList, [&] { run_benchmark(kSampleGray, Method::Svd, none); });
  const std::vector<std::size_t> bad{0};
  expect_code(Errc::InvalidRank, [&] { run_benchmark(kSampleGray, Method::Pca, bad); });
  const std::vector<std::size_t> ok{1};
  expect_code(Errc::DegenerateSpectrum,
              [&] { run_benchmark(Matrix{{3, 3}, {3, 3}}, Method::Pca, ok); });
  expect_code(Errc::ZeroReference, [&] { run_benchmark(Matrix(2, 2), Method::Svd, ok); });
}

TEST(RunBenchmark, RanksAreSortedAndDeduplicated) {
  const std::vector<std::size_t> ks{3, 1, 3, 2};
  const BenchReport r = run_benchmark(kSampleGray, Method::Pca, ks);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].k, 1u);
  EXPECT_EQ(r.rows[2].k, 3u);
}

TEST(RunBenchmark, RandomInvariants) {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = random_uniform(4 + trial % 9, 3 + trial % 6, 0, 255, rng);
    std::vector<std::size_t> ks;
    for (std::size_t k = 1; k <= std::min(x.rows(), x.cols()); ++k) ks.push_back(k);
    for (Method m : {Method::Pca, Method::Svd}) {
      const BenchReport r = run_benchmark(x, m, ks);
      expect_monotone(r);
      for (const auto& row : r.rows) {
        if (m == Method::Svd) {
          EXPECT_NEAR(row.energy_captured, 1.0 - row.relative_error * row.relative_error, 1e-8);
          EXPECT_EQ(row.stored_values, row.k * (x.rows() + x.cols() + 1));
        } else {
          EXPECT_EQ(row.stored_values, row.k * (x.rows() + x.cols()) + x.cols());
        }
      }
    }
  }
}

TEST(RunBenchmark, PcaErrorMatchesDiscardedVariance) {
  // For centered reconstruction, squared residual = (n-1) * sum of discarded eigenvalues.
  Rng rng(52);
  const Matrix x = random_gaussian(10, 4, rng);
  const std::vector<std::size_t> ks{1, 2, 3, 4};
  const BenchReport r = run_benchmark(x, Method::Pca, ks);
  const auto model = pca_fit(x, 4);
  for (const auto& row : r.rows) {
    double tail = 0.0;
    for (std::size_t i = row.k; i < 4; ++i) tail += model.spectrum()[i];
    EXPECT_NEAR(row.reconstruction_error * row.reconstruction_error, 9.0 * tail,
                1e-9 * frobenius_norm(x) * frobenius_norm(x));
  }
}

TEST(Aggregate, CombinesChannels) {
  Rng rng(53);
  const std::vector<std::size_t> ks{1, 2};
  std::vector<BenchReport> parts;
  Matrix stacked(12, 5);
  for (int c = 0; c < 3; ++c) {
    const Matrix x = random_uniform(4, 5, 0, 255, rng);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 5; ++j) stacked(4 * c + i, j) = x(i, j);
    parts.push_back(run_benchmark(x, Method::Svd, ks));
  }
  const BenchReport all = aggregate_reports(parts);
  ASSERT_EQ(all.rows.size(), 2u);
  for (std::size_t r = 0; r < 2; ++r) {
    double abs_sq = 0.0;
    std::size_t stored = 0;
    for (const auto& p : parts) {
      abs_sq += std::pow(p.rows[r].reconstruction_error, 2);
      stored += p.rows[r].stored_values;
    }
    EXPECT_NEAR(all.rows[r].reconstruction_error, std::sqrt(abs_sq), 1e-9);
    EXPECT_NEAR(all.rows[r].relative_error, std::sqrt(abs_sq) / frobenius_norm(stacked), 1e-12);
    EXPECT_EQ(all.rows[r].stored_values, stored);
    EXPECT_NEAR(all.rows[r].energy_captured, 1.0 - std::pow(all.rows[r].relative_error, 2), 1e-8);
  }
}

TEST(Compress, AgreesWithBenchmark) {
  const std::vector<std::size_t> ks{2};
  for (Method m : {Method::Pca, Method::Svd}) {
    const Compression c = compress(kSampleGray, m, 2);
    const BenchReport r = run_benchmark(kSampleGray, m, ks);
    EXPECT_EQ(c.error.relative, r.rows[0].relative_error);
    EXPECT_EQ(c.energy, r.rows[0].energy_captured);
  }
  expect_code(Errc::InvalidRank, [] { compress(kSampleGray, Method::Svd, 4); });
}

TEST(CenteringSensitivity, Examples) {
  const Matrix centered{{-1, 2}, {0, -1}, {1, -1}};
  EXPECT_LE(centering_sensitivity(centered, 1).pca_shift, 1e-9);
  EXPECT_LE(centering_sensitivity(centered, 1).svd_shift, 1e-9);

  const Matrix offset{{100, 100}, {101, 101}, {102, 102}};
  const CenteringShift s = centering_sensitivity(offset, 1);
  EXPECT_GT(s.pca_shift, 0.1);
  // Both paths capture rank-1 data exactly, so the SVD reconstructions agree.
  EXPECT_LE(s.svd_shift, 1e-9);

  Rng rng(54);
  const Matrix shifted = random_uniform(8, 5, 50, 60, rng);
  EXPECT_GT(centering_sensitivity(shifted, 1).svd_shift, 1e-3);
}

TEST(Stability, PerfectConditioning) {
  const StabilityReport r = stability_experiment(6, 1.0, 3);
  EXPECT_LE(r.rel_err_svd, 1e-10);
  EXPECT_LE(r.rel_err_cov, 1e-10);
  for (double s : r.sigma_true) EXPECT_EQ(s, 1.0);
}

TEST(Stability, IllConditionedSeparatesRoutes) {
  const StabilityReport r = stability_experiment(8, 1e8, 42);
  EXPECT_EQ(r.sigma_true[0], 1.0);
  EXPECT_NEAR(r.sigma_true[7], 1e-8, 1e-22);
  EXPECT_LE(r.rel_err_svd, 1e-6);
  EXPECT_GE(r.rel_err_cov, 1e-3);
  for (std::size_t i = 0; i + 1 < r.sigma_true.size(); ++i) EXPECT_GT(r.sigma_true[i], r.sigma_true[i + 1]);
}

TEST(Stability, DeterministicAndValidated) {
  const StabilityReport a = stability_experiment(5, 1e6, 9);
  const StabilityReport b = stability_experiment(5, 1e6, 9);
  EXPECT_EQ(a.sigma_via_svd, b.sigma_via_svd);
  EXPECT_EQ(a.sigma_via_covariance_eig, b.sigma_via_covariance_eig);
  EXPECT_EQ(a.rel_err_cov, b.rel_err_cov);
  expect_code(Errc::InvalidCondition, [] { stability_experiment(4, 0.5, 1); });
  expect_code(Errc::InvalidRank, [] { stability_experiment(1, 10.0, 1); });
}

TEST(Report, CsvAndJsonLayout) {
  const std::vector<std::size_t> ks{1, 2};
  const std::vector<ReportSection> sections{{"", run_benchmark(kSampleGray, Method::Svd, ks)}};
  const std::string csv = to_csv(sections);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), report_csv_header);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  // runtime column is empty unless timing is requested
  EXPECT_NE(csv.find(",,14\n"), std::string::npos);

  const auto json = nlohmann::json::parse(to_json(sections, {true}));
  ASSERT_EQ(json.size(), 2u);
  EXPECT_EQ(json[0]["method"], "svd");
  EXPECT_EQ(json[1]["k"], 2);
  EXPECT_EQ(json[1]["stored_values"], 14);
  EXPECT_TRUE(json[0]["runtime_s"].is_number());
  EXPECT_EQ(json[0]["rel_error"].get<double>(), sections[0].report.rows[0].relative_error);
}
