#include "lietrans/error.hpp"
#include "lietrans/linalg.hpp"
#include "lietrans/solver.hpp"
#include "prox_internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lietrans {

namespace {

// Row i holds mat(Z_i) x_i − (x̄_i − x_i).
Matrix row_residuals(const Matrix& x, const Matrix& diffs, const Matrix& z) {
  Matrix res(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    res.row(i) = (mat(z.row(i).transpose()) * x.row(i).transpose()).transpose() - diffs.row(i);
  }
  return res;
}

double fit_value(const Matrix& res, const SolverConfig& cfg) {
  if (cfg.loss == LossKind::squared) return res.squaredNorm();
  return (res.rowwise().squaredNorm().array() + cfg.smooth_eps).sqrt().sum();
}

Matrix fit_gradient(const Matrix& x, const Matrix& res, const SolverConfig& cfg) {
  const Index d = x.cols();
  Matrix dl = cfg.loss == LossKind::squared ? Matrix(2.0 * res) : Matrix(res);
  if (cfg.loss == LossKind::smoothed_norm) {
    dl = (res.rowwise().squaredNorm().array() + cfg.smooth_eps).sqrt().inverse().matrix().asDiagonal() * res;
  }
  Matrix g(x.rows(), d * d);
  for (Index i = 0; i < x.rows(); ++i) {
    // Row-major vec of dl_i x_iᵀ.
    for (Index a = 0; a < d; ++a) g.row(i).segment(a * d, d) = dl(i, a) * x.row(i);
  }
  return g;
}

}  // namespace

double full_convex_objective(const PairSet& pairs, const Matrix& z, const SolverConfig& cfg) {
  const Index d = pairs.d();
  if (z.rows() != pairs.n() || z.cols() != d * d) throw InvalidInput("full_convex_objective: Z must be n×d²");
  double obj = fit_value(row_residuals(pairs.base(), pairs.differences(), z), cfg);
  if (cfg.lambda > 0.0) obj += cfg.lambda * trace_norm(z);
  return obj;
}

Matrix solve_full_convex(const PairSet& pairs, const SolverConfig& cfg) {
  cfg.validate();
  const Index n = pairs.n();
  const Index d = pairs.d();
  if (d > 16 || n > 200) {
    throw InvalidInput("solve_full_convex: oracle limited to d <= 16 and n <= 200 (got d = " +
                       std::to_string(d) + ", n = " + std::to_string(n) + ")");
  }
  const Matrix& x = pairs.base();
  const Matrix diffs = pairs.differences();
  SvtMode exact;
  exact.kind = SvtMode::Kind::exact;

  double lip = 2.0 * x.rowwise().squaredNorm().maxCoeff();
  if (cfg.loss == LossKind::smoothed_norm) lip /= 2.0 * std::sqrt(cfg.smooth_eps);
  lip = std::max(lip, std::numeric_limits<double>::min());

  auto objective = [&](const Matrix& z, double norm) {
    return fit_value(row_residuals(x, diffs, z), cfg) + cfg.lambda * norm;
  };

  Matrix z = Matrix::Zero(n, d * d);
  Matrix y = z;
  double momentum = 1.0;
  double obj = objective(z, 0.0);
  for (int it = 0; it < cfg.iters; ++it) {
    const Matrix grad = fit_gradient(x, row_residuals(x, diffs, y), cfg);
    double next_norm = 0.0;
    Matrix next = detail::prox_trace_norm(y - grad / lip, cfg.lambda / lip, exact, cfg.K, next_norm);
    if (cfg.lambda == 0.0) next_norm = 0.0;
    const double next_obj = objective(next, next_norm);
    if (!std::isfinite(next_obj)) throw DivergenceError("solve_full_convex: non-finite objective");

    if (next_obj > obj) {
      // Adaptive restart: drop momentum and take a plain proximal step.
      if (momentum == 1.0) break;
      momentum = 1.0;
      y = z;
      continue;
    }
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = next + ((momentum - 1.0) / next_momentum) * (next - z);
    const double change = obj - next_obj;
    z = std::move(next);
    momentum = next_momentum;
    obj = next_obj;
    if (change <= cfg.tol * std::max(obj, std::numeric_limits<double>::min()) && it > 0) break;
  }
  return z;
}

}  // namespace lietrans
