#include "lietrans/embedding.hpp"

#include "lietrans/error.hpp"
#include "lietrans/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

namespace lietrans {

std::vector<Edge> minimum_spanning_tree(const Dataset& ds) {
  const Index n = ds.n();
  const Matrix& x = ds.points();
  std::vector<Edge> edges;
  if (n <= 1) return edges;
  edges.reserve(static_cast<std::size_t>(n - 1));

  std::vector<bool> in_tree(static_cast<std::size_t>(n), false);
  std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<Index> link(static_cast<std::size_t>(n), -1);
  Index current = 0;
  in_tree[0] = true;
  for (Index added = 1; added < n; ++added) {
    for (Index j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      const double dist = (x.row(j) - x.row(current)).squaredNorm();
      if (dist < best[j]) {
        best[j] = dist;
        link[j] = current;
      }
    }
    Index next = -1;
    for (Index j = 0; j < n; ++j) {
      if (!in_tree[j] && (next < 0 || best[j] < best[next])) next = j;
    }
    in_tree[next] = true;
    edges.push_back({next, link[next], std::sqrt(best[next])});
    current = next;
  }
  return edges;
}

Vector edge_increment(const GeneratorSet& gens, const Vector& child, const Vector& parent) {
  const auto K = static_cast<Index>(gens.K());
  Vector inc = Vector::Zero(K);
  std::vector<Index> used;
  Matrix basis(child.size(), K);
  for (Index k = 0; k < K; ++k) {
    Vector col = gens[static_cast<std::size_t>(k)] * child;
    const double norm = col.norm();
    if (norm > 1e-12) {
      basis.col(static_cast<Index>(used.size())) = col / norm;
      used.push_back(k);
    }
  }
  if (used.empty()) return inc;
  const Vector c = pseudo_inverse(basis.leftCols(static_cast<Index>(used.size())), 1e-10) * (child - parent);
  for (std::size_t u = 0; u < used.size(); ++u) inc(used[u]) = c(static_cast<Index>(u));
  return inc;
}

TreeEmbedding embed(const Dataset& ds, const GeneratorSet& gens, Index root) {
  const Index n = ds.n();
  if (gens.dim() != ds.d()) throw InvalidInput("embed: generator dimension does not match data");
  if (root < 0 || root >= n) throw InvalidInput("embed: root index out of range");

  TreeEmbedding out;
  out.root = root;
  const std::vector<Edge> tree = minimum_spanning_tree(ds);
  out.coords = Matrix::Zero(n, static_cast<Index>(gens.K()));

  std::vector<std::vector<std::pair<Index, double>>> adj(static_cast<std::size_t>(n));
  for (const auto& e : tree) {
    adj[e.child].push_back({e.parent, e.weight});
    adj[e.parent].push_back({e.child, e.weight});
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  }

  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<Index> queue;
  queue.push(root);
  seen[root] = true;
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop();
    out.traversal.push_back(v);
    for (const auto& [c, weight] : adj[v]) {
      if (seen[c]) continue;
      out.edges.push_back({c, v, weight});
      seen[c] = true;
      const Vector child = ds.points().row(c).transpose();
      const Vector parent = ds.points().row(v).transpose();
      out.coords.row(c) = out.coords.row(v) + edge_increment(gens, child, parent).transpose();
      queue.push(c);
    }
  }
  return out;
}

}  // namespace lietrans
