#pragma once

#include "lietrans/types.hpp"

#include <vector>

namespace lietrans {

struct Edge {
  Index child = 0;
  Index parent = 0;
  double weight = 0.0;
};

/// Euclidean MST by Prim's method grown from vertex 0. Edges are listed in
/// the order vertices join the tree; ties go to the lowest index.
std::vector<Edge> minimum_spanning_tree(const Dataset& ds);

struct TreeEmbedding {
  Matrix coords;  // n×K
  Index root = 0;
  std::vector<Edge> edges;       // MST oriented away from root, in BFS order
  std::vector<Index> traversal;  // BFS order from root
};

/// Integrates per-edge strength increments [A_k x/‖A_k x‖]⁺ (x_child − x_parent)
/// over the MST, breadth first from root.
TreeEmbedding embed(const Dataset& ds, const GeneratorSet& gens, Index root = 0);

/// Increment for one tree edge. Columns with ‖A_k x_child‖ <= 1e-12 get 0.
Vector edge_increment(const GeneratorSet& gens, const Vector& child, const Vector& parent);

}  // namespace lietrans
