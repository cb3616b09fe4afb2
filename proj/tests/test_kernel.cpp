#include "lietrans/error.hpp"
#include "lietrans/kernel.hpp"
#include "lietrans/linalg.hpp"
#include "lietrans/neighbors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lietrans;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  auto rng = make_rng(seed, 10);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

SolverConfig quick(int iters = 300) {
  SolverConfig cfg;
  cfg.iters = iters;
  return cfg;
}

}  // namespace

TEST(LaplacianKernel, Values) {
  const Vector x = random_matrix(3, 1, 1).col(0);
  EXPECT_DOUBLE_EQ(laplacian_kernel(x, x, 0.7), 1.0);
  Vector y = x;
  y(0) += 0.7;
  EXPECT_NEAR(laplacian_kernel(x, y, 0.7), std::exp(-1.0), 1e-15);
}

TEST(LaplacianKernel, Symmetric) {
  const Matrix a = random_matrix(6, 2, 2);
  const Matrix k = laplacian_kernel_matrix(a, a, 1.3);
  EXPECT_LE((k - k.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(MedianPairwiseDistance, ByHand) {
  Matrix pts(3, 1);
  pts << 0.0, 1.0, 3.0;
  EXPECT_DOUBLE_EQ(median_pairwise_distance(pts), 2.0);
}

TEST(KernelFactor, IllConditionedThrows) {
  Matrix pts(2, 1);
  pts << 0.0, 1e-14;
  EXPECT_THROW(kernel_factor(pts, 1e-15, 1.0), ConditioningError);
  EXPECT_NO_THROW(kernel_factor(pts, 1e-1, 1.0));
}

TEST(FitKernel, ZeroDifferencesGiveZeroWeights) {
  const Matrix x = random_matrix(8, 2, 3);
  const PairSet pairs(x, x, Provenance::nearest_neighbor);
  const KernelModel m = fit_kernel(pairs, KernelOptions{}, quick());
  EXPECT_EQ(m.alpha, Matrix::Zero(8, 8));
  EXPECT_EQ(predict_fields(m, x), Matrix::Zero(8, 2));
}

TEST(FitKernel, RepeatedBaseRowsShareOnePoint) {
  const Matrix x = random_matrix(10, 2, 4);
  const PairSet pairs = k_distinct_neighbors(Dataset(x), 2);
  const KernelModel m = fit_kernel(pairs, KernelOptions{2}, quick());
  EXPECT_EQ(m.r(), 10);
  EXPECT_EQ(m.pair_point.size(), 20u);
  EXPECT_EQ(m.pair_point[0], m.pair_point[1]);
  EXPECT_DOUBLE_EQ(m.lambda2, 1e-2);
  EXPECT_EQ(m.weights.cols(), 2);
}

TEST(FitKernel, RidgeShrinksFields) {
  const CircleSample s = sample_circle(40, 1);
  const PairSet pairs = k_distinct_neighbors(Dataset(s.points), 1);
  const Matrix probe = sample_circle(10, 2).points;
  double prev = std::numeric_limits<double>::infinity();
  for (double l2 : {1.0, 10.0, 100.0}) {
    KernelOptions opts;
    opts.lambda2 = l2;
    const double size = predict_fields(fit_kernel(pairs, opts, quick()), probe).norm();
    EXPECT_LT(size, prev) << l2;
    prev = size;
  }
}

TEST(FitKernel, CircleTangents) {
  const CircleSample train = sample_circle(200, 0);
  const CircleSample held = sample_circle(200, 0, 1);
  const KernelModel m = fit_kernel(k_distinct_neighbors(Dataset(train.points), 1), KernelOptions{}, SolverConfig{});
  const FieldScore score = score_field(predict_fields(m, held.points), held.tangents);
  EXPECT_GE(score.mean_cosine, 0.9);
}

TEST(PredictField, FarPointsVanish) {
  const CircleSample s = sample_circle(30, 3);
  const KernelModel m = fit_kernel(k_distinct_neighbors(Dataset(s.points), 1), KernelOptions{}, quick());
  Vector far(2);
  far << 1e3, -1e3;
  ASSERT_LT(laplacian_kernel_matrix(m.train_points, Matrix(far.transpose()), m.sigma).maxCoeff(), 1e-8);
  EXPECT_LE(predict_field(m, far).norm(), 1e-6);
}

TEST(PredictField, TrainingPointsReproduceFit) {
  const CircleSample s = sample_circle(25, 4);
  const PairSet pairs = k_distinct_neighbors(Dataset(s.points), 1);
  const KernelModel m = fit_kernel(pairs, KernelOptions{}, quick());
  Eigen::BDCSVD<Matrix> svd(m.alpha, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix u = svd.matrixU().leftCols(1);
  const Matrix f = predict_fields(m, pairs.base());
  // Pair i's fitted difference is Σ_k U_ik f_k(x_i); its residuals sum to the rank-K data fit.
  const Matrix fitted = u.asDiagonal() * f;
  EXPECT_NEAR((fitted - pairs.differences()).squaredNorm(), m.data_fit, 1e-10 * std::max(1.0, m.data_fit));
}

TEST(PredictField, LinearInWeights) {
  const CircleSample s = sample_circle(20, 5);
  KernelModel m = fit_kernel(k_distinct_neighbors(Dataset(s.points), 1), KernelOptions{}, quick());
  const Matrix before = predict_fields(m, s.points);
  m.weights *= 2.0;
  EXPECT_LE((predict_fields(m, s.points) - 2.0 * before).norm(), 1e-14 * std::max(1.0, before.norm()));
}

TEST(PredictField, ShapeAndDimensionCheck) {
  const Matrix x = random_matrix(12, 3, 6);
  const KernelModel m = fit_kernel(k_distinct_neighbors(Dataset(x), 2), KernelOptions{2}, quick(50));
  const Matrix f = predict_fields(m, x);
  EXPECT_EQ(f.rows(), 12);
  EXPECT_EQ(f.cols(), 6);
  EXPECT_TRUE(f.allFinite());
  EXPECT_EQ(predict_field(m, x.row(0).transpose()).rows(), 2);
  EXPECT_THROW(predict_fields(m, Matrix::Ones(2, 2)), InvalidInput);
}

TEST(CircleSample, OnCircleWithTangents) {
  const CircleSample s = sample_circle(50, 9);
  for (Index i = 0; i < 50; ++i) {
    EXPECT_NEAR(s.points.row(i).norm(), 1.0, 1e-15);
    EXPECT_NEAR(s.points.row(i).dot(s.tangents.row(i)), 0.0, 1e-15);
    // Counter-clockwise: z-component of p × t is +1.
    EXPECT_NEAR(s.points(i, 0) * s.tangents(i, 1) - s.points(i, 1) * s.tangents(i, 0), 1.0, 1e-15);
  }
}

TEST(ScoreField, PerfectAndReversed) {
  const CircleSample s = sample_circle(10, 10);
  const FieldScore same = score_field(3.0 * s.tangents, s.tangents);
  EXPECT_NEAR(same.mean_cosine, 1.0, 1e-15);
  EXPECT_NEAR(same.mean_error, 0.0, 1e-15);
  const FieldScore flipped = score_field(-s.tangents, s.tangents);
  EXPECT_NEAR(flipped.mean_cosine, 1.0, 1e-15);
  EXPECT_NEAR(flipped.mean_error, 0.0, 1e-15);
  EXPECT_THROW(score_field(Matrix::Ones(3, 2), s.tangents), InvalidInput);
}
