#pragma once

#include "lietrans/solver.hpp"
#include "lietrans/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lietrans {

enum class Method { convex, convex_gradient, nonconvex };

std::string to_string(Method m);
/// Accepts "convex", "convex+gradient", "nonconvex". Throws InvalidInput.
Method method_from_string(const std::string& s);

struct LearnOptions {
  Method method = Method::convex_gradient;
  Index K = 1;
  SolverConfig convex;     // sampled convex stage
  SolverConfig gradient;   // nonconvex stage (both the baseline and the refinement)
  std::vector<double> lambdas;  // swept for the convex stage; empty means convex.lambda
  std::optional<Index> samples; // r; default min(n, 5000)
  bool disentangle = true;
};

struct LearnResult {
  GeneratorSet generators;
  Matrix strengths;  // n×K
  std::optional<AlphaSolution> alpha;
  double chosen_lambda = 0.0;
  std::vector<double> lambda_fits;  // rank-K data fit per swept lambda
  std::vector<double> objective_trace;
  std::vector<double> restart_objectives;
  std::string warning;
};

/// Rescales each pair (t_k, A_k) so that ‖t_k‖₂ = ‖A_k‖_F; products are unchanged.
void balance(Matrix& t, std::vector<Matrix>& gens);

/// Squared-loss fit Σ_i ‖Σ_k t_ik A_k x_i − (x̄_i − x_i)‖².
double model_fit(const PairSet& pairs, const Matrix& t, const GeneratorSet& gens);

LearnResult learn(const PairSet& pairs, const LearnOptions& opts);

}  // namespace lietrans
