#include "lietrans/error.hpp"
#include "lietrans/solver.hpp"

#include <algorithm>

namespace lietrans {

Reconstruction reconstruct_generators(const AlphaSolution& sol, const PairSet& pairs, Index K,
                                      const WhitenTransform* whiten) {
  const Index n = pairs.n();
  const auto r = static_cast<Index>(sol.sample_idx.size());
  if (K < 1) throw InvalidInput("reconstruct_generators: K must be >= 1");
  if (sol.rows() != n) throw InvalidInput("reconstruct_generators: solution does not match pairs");
  if (K > std::min(n, r)) throw InvalidInput("reconstruct_generators: K exceeds min(n, r)");

  Matrix x = pairs.base();
  Matrix xbar = pairs.neighbor();
  const WhitenTransform* transform = sol.whitening ? &*sol.whitening : whiten;
  if (sol.whitened_space) {
    x = sol.whitening->apply(x);
    xbar = sol.whitening->apply(xbar);
  }
  Matrix xs(r, x.cols());
  Matrix ds(r, x.cols());
  for (Index j = 0; j < r; ++j) {
    xs.row(j) = x.row(sol.sample_idx[j]);
    ds.row(j) = xbar.row(sol.sample_idx[j]) - x.row(sol.sample_idx[j]);
  }

  Reconstruction out;
  Matrix left;
  Matrix right;
  if (sol.factors) {
    if (sol.factors->left.cols() < K) throw InvalidInput("reconstruct_generators: K exceeds stored factors");
    left = sol.factors->left.leftCols(K);
    right = sol.factors->right.leftCols(K);
    out.singular_values = Vector::Ones(K);
  } else {
    Eigen::BDCSVD<Matrix> svd(sol.alpha, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    left = svd.matrixU().leftCols(K);
    right = svd.matrixV().leftCols(K) * s.head(K).asDiagonal();
    out.singular_values = s.head(K);
    if (!(s(0) > 0.0) || s(K - 1) < 1e-10 * s(0)) {
      out.rank_deficient = true;
      out.warning = "weight matrix has numerical rank below K = " + std::to_string(K);
      for (Index k = 0; k < K; ++k) {
        if (!(s(k) > 1e-10 * s(0))) left.col(k).setZero();
      }
    }
  }

  std::vector<Matrix> gens;
  gens.reserve(static_cast<std::size_t>(K));
  for (Index k = 0; k < K; ++k) {
    // A_k = Σ_j w_jk (x̄_j − x_j) x_jᵀ
    Matrix a = ds.transpose() * right.col(k).asDiagonal() * xs;
    if (sol.whitened_space) {
      a = sol.whitening->unwhiten_generator(a);
    } else if (transform) {
      a = a * transform->precision();
    }
    gens.push_back(std::move(a));
  }
  out.generators = GeneratorSet(std::move(gens));
  out.strengths = std::move(left);
  return out;
}

}  // namespace lietrans
