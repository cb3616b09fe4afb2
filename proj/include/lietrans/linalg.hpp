#pragma once

#include "lietrans/types.hpp"

#include <cstdint>
#include <random>

namespace lietrans {

/// exp(t·A) by scaling-and-squaring with a truncated Taylor series.
/// Throws InvalidInput on non-finite input.
Matrix matrix_exp(const Matrix& a, double t = 1.0);

/// Default ridge 1e-8·tr(Σ)/d for Σ = XᵀX/n.
double default_whiten_ridge(const Dataset& ds);

struct Whitened {
  Dataset data;
  WhitenTransform transform;
};

/// Y = X·(Σ + ridge·I)^{-1/2} with Σ = XᵀX/n (uncentered second moment).
/// Throws RankDeficiency when Σ + ridge·I is numerically singular.
Whitened whiten(const Dataset& ds, double ridge);

/// Sum of singular values.
double trace_norm(const Matrix& m);

/// Moore–Penrose pseudoinverse with cutoff rel_cutoff·σ_max.
Matrix pseudo_inverse(const Matrix& m, double rel_cutoff = 1e-10);

/// Row-major unrolling of a square matrix into a length-d² vector.
Vector vec(const Matrix& a);
/// Inverse of vec().
Matrix mat(const Eigen::Ref<const Vector>& v);

/// Deterministic generator for a (seed, stream) pair.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Worker count, capped by LIETRANS_THREADS when set (default 1).
unsigned worker_threads();

}  // namespace lietrans
