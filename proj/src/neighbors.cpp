#include "lietrans/neighbors.hpp"

#include "lietrans/error.hpp"
#include "lietrans/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <thread>

namespace lietrans {

NeighborIndex::NeighborIndex(const Matrix& points) : points_(points) {}

double NeighborIndex::distance2(Index i, Index j) const {
  return (points_.row(i) - points_.row(j)).squaredNorm();
}

std::vector<Index> NeighborIndex::query(Index i, Index k) const {
  const Index n = points_.rows();
  std::vector<std::pair<double, Index>> cand;
  cand.reserve(static_cast<std::size_t>(n - 1));
  for (Index j = 0; j < n; ++j) {
    if (j != i) cand.emplace_back(distance2(i, j), j);
  }
  k = std::min<Index>(k, static_cast<Index>(cand.size()));
  std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
  std::vector<Index> out(static_cast<std::size_t>(k));
  for (Index j = 0; j < k; ++j) out[j] = cand[j].second;
  return out;
}

std::vector<Index> nearest_neighbor_indices(const Matrix& points) {
  const Index n = points.rows();
  NeighborIndex index(points);
  std::vector<Index> nn(static_cast<std::size_t>(n));
  auto scan = [&](Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      double best = std::numeric_limits<double>::infinity();
      Index arg = -1;
      for (Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d2 = index.distance2(i, j);
        if (d2 < best) {
          best = d2;
          arg = j;
        }
      }
      nn[i] = arg;
    }
  };
  // Rows are independent, so a row-partitioned scan is identical to the serial one.
  const auto workers = static_cast<Index>(std::min<unsigned>(worker_threads(), 16));
  if (workers <= 1 || n < 256) {
    scan(0, n);
  } else {
    std::vector<std::jthread> pool;
    const Index chunk = (n + workers - 1) / workers;
    for (Index b = 0; b < n; b += chunk) pool.emplace_back(scan, b, std::min(n, b + chunk));
  }
  return nn;
}

PairSet nearest_neighbors(const Dataset& ds) {
  if (ds.n() < 2) throw InvalidInput("nearest_neighbors: need at least 2 points");
  const auto nn = nearest_neighbor_indices(ds.points());
  Matrix neighbor(ds.n(), ds.d());
  for (Index i = 0; i < ds.n(); ++i) neighbor.row(i) = ds.points().row(nn[i]);
  return PairSet(ds.points(), std::move(neighbor), Provenance::nearest_neighbor);
}

PairSet k_distinct_neighbors(const Dataset& ds, Index K) {
  if (K < 1) throw InvalidInput("k_distinct_neighbors: K must be >= 1");
  if (ds.n() <= K) throw InvalidInput("k_distinct_neighbors: need n > K");
  NeighborIndex index(ds.points());
  const Index n = ds.n();
  Matrix base(n * K, ds.d());
  Matrix neighbor(n * K, ds.d());
  for (Index i = 0; i < n; ++i) {
    const auto nn = index.query(i, K);
    for (Index j = 0; j < K; ++j) {
      base.row(i * K + j) = ds.points().row(i);
      neighbor.row(i * K + j) = ds.points().row(nn[j]);
    }
  }
  return PairSet(std::move(base), std::move(neighbor), Provenance::nearest_neighbor);
}

}  // namespace lietrans
