#include <dimred/csv.hpp>
#include <dimred/matrix.hpp>

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace dimred;

TEST(Matrix, RejectsNonFiniteAndBadLength) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Matrix(1, 2, std::vector<double>{1.0, nan}), Error);
  EXPECT_THROW((Matrix{{1.0, inf}}), Error);
  EXPECT_THROW(Vector({1.0, nan}), Error);
  try {
    Matrix(2, 2, std::vector<double>{1.0, 2.0, 3.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(Matrix, RowMajorLayout) {
  const Matrix m(2, 3, std::vector<double>{1, 2, 3, 4, 5, 6});
  EXPECT_EQ(m(1, 0), 4.0);
  EXPECT_EQ(m.values()[1 * 3 + 2], m(1, 2));
}

TEST(Matmul, IdentityLeavesMatrixUnchanged) {
  const Matrix b{{5, 6}, {7, 8}};
  EXPECT_EQ(matmul(Matrix::identity(2), b), b);
}

TEST(Matmul, HandEvaluatedProduct) {
  // [[1,2],[3,4]] * [0,1]^T picks the second column.
  EXPECT_EQ(matmul(Matrix{{1, 2}, {3, 4}}, Matrix{{0}, {1}}), (Matrix{{2}, {4}}));
}

TEST(Matmul, ShapeMismatchCarriesBothShapes) {
  try {
    matmul(Matrix{{1, 2}}, Matrix{{1, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
    EXPECT_NE(std::string(e.what()).find("1x2"), std::string::npos);
  }
}

TEST(Transpose, Basics) {
  EXPECT_EQ(transpose(Matrix{{1, 2}, {3, 4}}), (Matrix{{1, 3}, {2, 4}}));
  const Matrix row{{1, 2, 3}};
  EXPECT_EQ(transpose(row).shape(), (Shape{3, 1}));
  Rng rng(3);
  const Matrix a = random_gaussian(4, 7, rng);
  EXPECT_EQ(transpose(transpose(a)), a);
}

TEST(Frobenius, Examples) {
  EXPECT_DOUBLE_EQ(frobenius_norm(Matrix{{3, 4}}), 5.0);
  EXPECT_EQ(frobenius_norm(Matrix(4, 4)), 0.0);
  EXPECT_DOUBLE_EQ(frobenius_norm(Matrix::identity(7)), std::sqrt(7.0));
}

TEST(MatrixProperties, FrobeniusSquaredIsTraceOfGram) {
  Rng rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 16);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = random_gaussian(dim(rng), dim(rng), rng);
    const double f2 = std::pow(frobenius_norm(a), 2);
    EXPECT_NEAR(f2, trace(matmul(transpose(a), a)), 1e-10 * f2);
  }
}

TEST(MatrixProperties, AssociativityAndTransposeOfProduct) {
  Rng rng(12);
  std::uniform_int_distribution<std::size_t> dim(1, 16);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = dim(rng), n = dim(rng), p = dim(rng), q = dim(rng);
    const Matrix a = random_gaussian(m, n, rng);
    const Matrix b = random_gaussian(n, p, rng);
    const Matrix c = random_gaussian(p, q, rng);
    const Matrix left = matmul(matmul(a, b), c);
    const Matrix right = matmul(a, matmul(b, c));
    EXPECT_LE(frobenius_norm(left - right), 1e-9 * frobenius_norm(left));

    const Matrix ab = matmul(a, b);
    EXPECT_LE(max_abs(transpose(ab) - matmul(transpose(b), transpose(a))), 1e-10 * std::max(1.0, max_abs(ab)));
  }
}

TEST(MatrixProperties, ProductIsDeterministic) {
  Rng rng(13);
  const Matrix a = random_gaussian(9, 5, rng);
  const Matrix b = random_gaussian(5, 6, rng);
  EXPECT_EQ(matmul(a, b), matmul(a, b));
}

TEST(Csv, ParsesLfAndCrlf) {
  EXPECT_EQ(read_csv_matrix("1,2\n3,4\n"), (Matrix{{1, 2}, {3, 4}}));
  EXPECT_EQ(read_csv_matrix("1,2\r\n3,4\r\n"), (Matrix{{1, 2}, {3, 4}}));
  EXPECT_EQ(read_csv_matrix("1.5, -2e3"), (Matrix{{1.5, -2000}}));
}

TEST(Csv, RejectsMalformedInput) {
  for (const char* bad : {"", "1,2\n3\n", "1,x\n", "1,,2\n", "1\n\n2\n", "nan\n"}) {
    EXPECT_THROW(read_csv_matrix(bad), Error) << bad;
  }
}

TEST(Csv, WriteReadRoundTripIsExact) {
  Rng rng(5);
  const Matrix a = random_gaussian(6, 4, rng);
  EXPECT_EQ(read_csv_matrix(write_csv_matrix(a)), a);
}
