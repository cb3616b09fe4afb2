#pragma once

#include "lietrans/types.hpp"

#include <string>

namespace lietrans {

struct DisentangledSet {
  GeneratorSet generators;  // Â_k = S_k·mat(V_k)
  Matrix strengths;         // n×K, orthonormal columns
  Vector singular_values;   // non-increasing
  Vector means;             // column means removed from the input strengths
  std::string warning;      // set when fewer than K components survive
};

/// SVD of Z with rows Σ_k t_ik vec(A_k), after centering the columns of t.
/// Each Â_k is signed so its entries sum to a non-negative value.
DisentangledSet disentangle(const Matrix& t, const GeneratorSet& gens);

struct StrengthEstimate {
  Matrix t;  // n×K
  std::string warning;
};

/// Per-point least squares t_i = [A_1 x_i | … | A_K x_i]⁺ (x̄_i − x_i).
/// Generators that vanish at x_i get coordinate 0 there.
StrengthEstimate estimate_strengths(const PairSet& pairs, const GeneratorSet& gens);

}  // namespace lietrans
