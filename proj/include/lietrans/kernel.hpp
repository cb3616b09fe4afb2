#pragma once

#include "lietrans/solver.hpp"
#include "lietrans/types.hpp"

#include <optional>
#include <vector>

namespace lietrans {

/// exp(−‖x − y‖₂/σ).
double laplacian_kernel(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                        double sigma);

/// κ(a_i, b_j) for all row pairs.
Matrix laplacian_kernel_matrix(const Matrix& a, const Matrix& b, double sigma);

/// Cholesky factor of κ(P,P) + λ₂I. Throws ConditioningError when the
/// condition number exceeds 1e12.
Eigen::LLT<Matrix> kernel_factor(const Matrix& points, double lambda2, double sigma);

/// Smoothed basis h_j(q) = e_jᵀ(κ(P,P) + λ₂I)⁻¹κ(P, q) for the rows j of P,
/// evaluated at every query row: returns |P|×|Q|.
Matrix smoothed_basis(const Matrix& points, double lambda2, double sigma, const Matrix& queries);

struct KernelModel {
  Matrix train_points;              // r×d unique base points
  std::vector<Index> pair_point;    // pair j → row of train_points
  Matrix diffs;                     // n×d, x̄_j − x_j
  Matrix alpha;                     // n×n pair weights
  Matrix weights;                   // n×K, V_K S_K from the SVD of alpha
  double sigma = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Index K = 1;
  Eigen::LLT<Matrix> factor;        // of κ(P,P) + λ₂I
  std::vector<double> objective_trace;
  double data_fit = 0.0;

  Index r() const noexcept { return train_points.rows(); }
};

struct KernelOptions {
  Index K = 1;
  double lambda1 = 1e-4;
  std::optional<double> lambda2;  // default 1e-3·r
  std::optional<double> sigma;    // default median pairwise distance
};

/// Median Euclidean distance over all distinct row pairs.
double median_pairwise_distance(const Matrix& points);

/// Fits α on pairs whose base rows may repeat (k_distinct_neighbors output).
/// Throws ConditioningError when cond(κ + λ₂I) > 1e12.
KernelModel fit_kernel(const PairSet& pairs, const KernelOptions& opts, const SolverConfig& cfg);

/// K×d: row k is f_k(x') = Σ_j W_jk (x̄_j − x_j) h_{u(j)}(x').
Matrix predict_field(const KernelModel& model, const Eigen::Ref<const Vector>& point);

/// Same for many points: m×(K·d), fields concatenated per row.
Matrix predict_fields(const KernelModel& model, const Matrix& points);

/// Points on the unit circle at uniform random angles, with their unit
/// counter-clockwise tangents.
struct CircleSample {
  Matrix points;
  Matrix tangents;
};
CircleSample sample_circle(Index n, std::uint64_t seed, std::uint64_t stream = 0);

struct FieldScore {
  double mean_cosine = 0.0;  // |mean cos(f̂, F)|
  double mean_error = 0.0;   // mean ‖s·f̂/‖f̂‖ − F‖ with one global sign s
};

/// Compares predicted fields (one vector per row) with reference unit tangents.
FieldScore score_field(const Matrix& predicted, const Matrix& tangents);

}  // namespace lietrans
