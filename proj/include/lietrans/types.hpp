#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lietrans {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr const char* kVersion = "0.3.0";

/// Observed points, one per row.
class Dataset {
 public:
  Dataset() = default;
  /// Throws InvalidInput on empty or non-finite data, or if grid_side² != d.
  explicit Dataset(Matrix points, std::optional<int> grid_side = std::nullopt);

  const Matrix& points() const noexcept { return points_; }
  Index n() const noexcept { return points_.rows(); }
  Index d() const noexcept { return points_.cols(); }
  std::optional<int> grid_side() const noexcept { return grid_side_; }

 private:
  Matrix points_;
  std::optional<int> grid_side_;
};

enum class Provenance { nearest_neighbor, synthetic };

/// Aligned (x_i, x̄_i) pairs. Strengths are only known for synthetic data.
class PairSet {
 public:
  PairSet() = default;
  PairSet(Matrix base, Matrix neighbor, Provenance provenance,
          std::optional<Matrix> strengths = std::nullopt);

  const Matrix& base() const noexcept { return base_; }
  const Matrix& neighbor() const noexcept { return neighbor_; }
  const std::optional<Matrix>& strengths() const noexcept { return strengths_; }
  Provenance provenance() const noexcept { return provenance_; }
  Index n() const noexcept { return base_.rows(); }
  Index d() const noexcept { return base_.cols(); }

  /// Rows x̄_i − x_i.
  Matrix differences() const { return neighbor_ - base_; }

 private:
  Matrix base_;
  Matrix neighbor_;
  std::optional<Matrix> strengths_;
  Provenance provenance_ = Provenance::nearest_neighbor;
};

/// K square generator matrices of a common dimension.
class GeneratorSet {
 public:
  GeneratorSet() = default;
  explicit GeneratorSet(std::vector<Matrix> generators, bool normalized = false);

  const std::vector<Matrix>& generators() const noexcept { return generators_; }
  const Matrix& operator[](std::size_t k) const { return generators_.at(k); }
  std::size_t K() const noexcept { return generators_.size(); }
  Index dim() const noexcept { return generators_.empty() ? 0 : generators_.front().rows(); }
  bool normalized() const noexcept { return normalized_; }

 private:
  std::vector<Matrix> generators_;
  bool normalized_ = false;
};

/// Σ^{-1/2} and Σ^{1/2} for the ridge-regularized second-moment matrix.
struct WhitenTransform {
  Matrix forward;
  Matrix inverse;
  double ridge = 0.0;

  /// Σ^{-1} (ridge-regularized).
  Matrix precision() const { return forward * forward; }
  /// W A W^{-1}: generator acting on whitened points.
  Matrix whiten_generator(const Matrix& a) const { return forward * a * inverse; }
  /// W^{-1} A W: generator acting on original points.
  Matrix unwhiten_generator(const Matrix& a) const { return inverse * a * forward; }
  GeneratorSet unwhiten(const GeneratorSet& gens) const;
  GeneratorSet whiten(const GeneratorSet& gens) const;
  /// Rows mapped x ↦ W x.
  Matrix apply(const Matrix& rows) const { return rows * forward; }
};

enum class TransformKind { rotation2d, image_rotation, translate_h, translate_v, custom };
enum class Exactness { exponential, first_order };

struct TransformSpec {
  TransformKind kind = TransformKind::rotation2d;
  Matrix custom;  // only for TransformKind::custom
};

/// Ground-truth synthesis recipe. One TransformSpec per simultaneous transform.
struct SyntheticSpec {
  std::vector<TransformSpec> kind;
  int side = 0;
  double strength_low = 0.05;
  double strength_high = 0.2;
  int K = 1;
  int n = 0;
  std::uint64_t seed = 0;
  Exactness exactness = Exactness::first_order;

  /// Throws InvalidInput when the fields are inconsistent.
  void validate() const;
  /// Ambient dimension implied by the transform kinds and side.
  Index dimension() const;
};

std::string to_string(TransformKind kind);
std::string to_string(Exactness e);
std::string to_string(Provenance p);

}  // namespace lietrans
