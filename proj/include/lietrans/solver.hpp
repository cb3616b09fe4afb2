#pragma once

#include "lietrans/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace lietrans {

enum class LossKind { squared, smoothed_norm };

/// Singular value thresholding backend. Automatic picks the randomized
/// range finder when min(rows, cols) > 500.
struct SvtMode {
  enum class Kind { automatic, exact, randomized };
  Kind kind = Kind::automatic;
  int oversample = 10;
  int power_iters = 2;
  std::uint64_t seed = 0;
};

struct SolverConfig {
  LossKind loss = LossKind::squared;
  double smooth_eps = 1e-6;  // ε_s of √(‖r‖² + ε_s)
  double lambda = 0.0;       // trace-norm weight
  double step = 0.1;         // Adagrad base rate η
  double adagrad_delta = 1e-8;
  Index minibatch = 256;     // effective size is min(n, minibatch)
  int iters = 2000;
  Index K = 1;
  SvtMode svt;
  std::optional<Index> tracenorm_rows;  // row-subsampled penalty reporting
  int restarts = 1;
  std::uint64_t seed = 0;
  double tol = 1e-9;  // relative objective change
  bool whiten = true;

  /// Throws InvalidInput when a field is out of range.
  void validate() const;
};

nlohmann::json to_json(const SolverConfig& cfg);
/// Missing fields keep their defaults.
SolverConfig solver_config_from_json(const nlohmann::json& j);

/// α = left · rightᵀ with left n×K and right r×K.
struct WeightFactors {
  Matrix left;
  Matrix right;
};

struct AlphaSolution {
  Matrix alpha;  // n×r; empty when only factors are stored
  std::vector<Index> sample_idx;
  std::vector<double> objective_trace;
  SolverConfig config;
  /// Set when alpha acts on whitened points (solver default) or, for raw-space
  /// solutions, when reconstruction should multiply by the precision Σ^{-1}.
  std::optional<WhitenTransform> whitening;
  bool whitened_space = false;
  std::optional<WeightFactors> factors;

  /// alpha, materializing left·rightᵀ when only factors are stored.
  Matrix dense_alpha() const;
  Index rows() const;
};

struct NonconvexSolution {
  Matrix t;  // n×K
  GeneratorSet generators;
  double objective = 0.0;
  std::vector<double> restart_objectives;
  std::vector<double> objective_trace;  // best run
};

struct NonconvexInit {
  Matrix t;
  GeneratorSet generators;
};

struct Reconstruction {
  GeneratorSet generators;
  Matrix strengths;  // n×K
  Vector singular_values;
  bool rank_deficient = false;
  std::string warning;
};

// ---- proximal operators ----------------------------------------------------

/// U·max(S − tau, 0)·Vᵀ. rank_hint sizes the randomized sketch (rank_hint + oversample).
Matrix prox_trace_norm(const Matrix& m, double tau, const SvtMode& mode = {}, Index rank_hint = 1);

/// ‖Y‖*/√L for L rows of X drawn uniformly with replacement.
double subsampled_trace_norm(const Matrix& x, Index rows, std::uint64_t seed);
/// ‖Y‖*/√L for the given row indices (repeats allowed).
double subsampled_trace_norm(const Matrix& x, std::span<const Index> rows);

// ---- Adagrad ---------------------------------------------------------------

/// Per-coordinate accumulator of squared gradients.
struct AdagradState {
  Matrix accum;
  double step = 0.1;
  double delta = 1e-8;

  AdagradState() = default;
  AdagradState(Index rows, Index cols, double step, double delta);
  /// Scalar step consistent with the accumulator: η/√(mean(G) + δ).
  double effective_step() const;
};

/// G += g²; returns −η·g/√(G + δ). Throws InvalidInput on shape mismatch.
Matrix adagrad_step(AdagradState& state, const Matrix& gradient);

// ---- sampled convex relaxation ---------------------------------------------

/// Weighted-atom regression shared by the linear and kernel learners:
///   min_α Σ_i ℓ(Σ_j α_ij C_ij D_j − T_i) + λ‖α‖_*
struct AtomProblem {
  Matrix coupling;  // n×r, C_ij
  Matrix atoms;     // r×d, D_j
  Matrix targets;   // n×d, T_i
};

double atom_data_fit(const AtomProblem& p, const Matrix& alpha, const SolverConfig& cfg);
double atom_objective(const AtomProblem& p, const Matrix& alpha, const SolverConfig& cfg);
/// Gradient of the data-fit term with respect to alpha.
Matrix atom_gradient(const AtomProblem& p, const Matrix& alpha, const SolverConfig& cfg);

struct AtomFit {
  Matrix alpha;
  std::vector<double> objective_trace;
};

/// Minibatch proximal gradient with Adagrad scaling. Full-batch runs fall back
/// to a backtracking proximal step whenever the Adagrad step would raise the
/// objective, so their trace is non-increasing. Throws DivergenceError.
AtomFit fit_atom_weights(const AtomProblem& p, const SolverConfig& cfg);

/// Subsampled solver over the first-r-of-a-seeded-shuffle samples (all rows when r = n).
AlphaSolution solve_sampled_convex(const PairSet& pairs, Index r, const SolverConfig& cfg);
/// Same with explicit sample indices.
AlphaSolution solve_sampled_convex(const PairSet& pairs, std::span<const Index> samples,
                                   const SolverConfig& cfg);

/// Weights that reproduce the generators exactly (K = 1) or in expectation (K > 1).
/// Needs synthetic pairs. Throws InvalidInput if some t_i = 0 (K = 1) or a
/// strength column has zero second moment.
AlphaSolution closed_form_weights(const PairSet& pairs, const WhitenTransform* whiten = nullptr);

/// Rank-K generators and strengths from a weight solution.
Reconstruction reconstruct_generators(const AlphaSolution& sol, const PairSet& pairs, Index K,
                                      const WhitenTransform* whiten = nullptr);

// ---- nonconvex baseline ----------------------------------------------------

double nonconvex_objective(const PairSet& pairs, const Matrix& t, const GeneratorSet& gens,
                           const SolverConfig& cfg);

struct NonconvexGradient {
  Matrix t;
  std::vector<Matrix> generators;
};
NonconvexGradient nonconvex_gradient(const PairSet& pairs, const Matrix& t,
                                     const GeneratorSet& gens, const SolverConfig& cfg);

/// Joint Adagrad descent on (t, A). Without init, runs cfg.restarts random
/// starts and keeps the best. Throws DivergenceError.
NonconvexSolution solve_nonconvex(const PairSet& pairs, Index K, const SolverConfig& cfg,
                                  const std::optional<NonconvexInit>& init = std::nullopt);

// ---- full convex oracle ----------------------------------------------------

double full_convex_objective(const PairSet& pairs, const Matrix& z, const SolverConfig& cfg);

/// Accelerated proximal gradient on Z ∈ R^{n×d²}. Oracle scale only:
/// throws InvalidInput when d > 16 or n > 200.
Matrix solve_full_convex(const PairSet& pairs, const SolverConfig& cfg);

}  // namespace lietrans
