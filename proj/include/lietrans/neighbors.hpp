#pragma once

#include "lietrans/types.hpp"

#include <vector>

namespace lietrans {

/// Exact Euclidean search, self excluded, ties broken by lowest index.
class NeighborIndex {
 public:
  explicit NeighborIndex(const Matrix& points);

  /// Indices of the k nearest other points of row i, nearest first.
  std::vector<Index> query(Index i, Index k) const;
  /// Squared Euclidean distance between rows i and j.
  double distance2(Index i, Index j) const;
  Index size() const noexcept { return points_.rows(); }

 private:
  const Matrix& points_;
};

/// Pairs each point with its nearest other point. Throws InvalidInput if n < 2.
PairSet nearest_neighbors(const Dataset& ds);

/// n·K rows: point i repeated K times, its j-th copy paired with its j-th
/// nearest distinct neighbor. Throws InvalidInput if n <= K.
PairSet k_distinct_neighbors(const Dataset& ds, Index K);

/// Index of the nearest neighbor for every row (the search behind nearest_neighbors).
std::vector<Index> nearest_neighbor_indices(const Matrix& points);

}  // namespace lietrans
