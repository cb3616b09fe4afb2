#include "lietrans/error.hpp"
#include "lietrans/linalg.hpp"
#include "lietrans/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lietrans {

namespace {

struct Batch {
  Matrix x;
  Matrix diffs;
  Matrix t;
};

// Rows A_k x_i for every k.
std::vector<Matrix> transformed(const Matrix& x, const GeneratorSet& gens) {
  std::vector<Matrix> y;
  y.reserve(gens.K());
  for (const auto& a : gens.generators()) y.push_back(x * a.transpose());
  return y;
}

Matrix residual(const Batch& b, const std::vector<Matrix>& y) {
  Matrix r = -b.diffs;
  for (std::size_t k = 0; k < y.size(); ++k) r += b.t.col(static_cast<Index>(k)).asDiagonal() * y[k];
  return r;
}

double loss_sum(const Matrix& res, const SolverConfig& cfg) {
  if (cfg.loss == LossKind::squared) return res.squaredNorm();
  return (res.rowwise().squaredNorm().array() + cfg.smooth_eps).sqrt().sum();
}

Matrix loss_derivative(const Matrix& res, const SolverConfig& cfg) {
  if (cfg.loss == LossKind::squared) return 2.0 * res;
  Vector scale = (res.rowwise().squaredNorm().array() + cfg.smooth_eps).sqrt().inverse();
  return scale.asDiagonal() * res;
}

NonconvexGradient batch_gradient(const Batch& b, const GeneratorSet& gens, const SolverConfig& cfg) {
  const auto y = transformed(b.x, gens);
  const Matrix dl = loss_derivative(residual(b, y), cfg);
  NonconvexGradient g;
  g.t.resize(b.t.rows(), b.t.cols());
  for (std::size_t k = 0; k < y.size(); ++k) {
    const auto kk = static_cast<Index>(k);
    g.t.col(kk) = dl.cwiseProduct(y[k]).rowwise().sum();
    g.generators.push_back(dl.transpose() * b.t.col(kk).asDiagonal() * b.x);
  }
  return g;
}

void check_shapes(const PairSet& pairs, const Matrix& t, const GeneratorSet& gens) {
  if (t.rows() != pairs.n() || t.cols() != static_cast<Index>(gens.K())) {
    throw InvalidInput("nonconvex: strengths must be n×K");
  }
  if (gens.dim() != pairs.d()) throw InvalidInput("nonconvex: generator dimension mismatch");
}

struct Run {
  Matrix t;
  std::vector<Matrix> gens;
  double objective = 0.0;
  std::vector<double> trace;
};

Run descend(const PairSet& pairs, Matrix t, std::vector<Matrix> gens, const SolverConfig& cfg) {
  const Index n = pairs.n();
  const Matrix diffs = pairs.differences();
  const Index batch = std::min(cfg.minibatch, n);
  const bool full_batch = batch >= n;

  AdagradState t_state(t.rows(), t.cols(), cfg.step, cfg.adagrad_delta);
  std::vector<AdagradState> a_state;
  for (const auto& a : gens) a_state.emplace_back(a.rows(), a.cols(), cfg.step, cfg.adagrad_delta);

  auto full_objective = [&]() {
    return nonconvex_objective(pairs, t, GeneratorSet(gens), cfg);
  };
  double obj = full_objective();
  // Divergence is judged against the larger of the start and the all-zero model.
  std::vector<Matrix> zeros;
  for (const auto& a : gens) zeros.push_back(Matrix::Zero(a.rows(), a.cols()));
  const double initial =
      std::max(obj, nonconvex_objective(pairs, Matrix::Zero(t.rows(), t.cols()), GeneratorSet(zeros), cfg));
  double epoch_ref = obj;

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  auto rng = make_rng(cfg.seed, 4);
  std::size_t cursor = order.size();

  Run run;
  run.trace.reserve(static_cast<std::size_t>(cfg.iters));
  for (int it = 0; it < cfg.iters; ++it) {
    NonconvexGradient g;
    bool epoch_end = full_batch;
    if (full_batch) {
      g = batch_gradient({pairs.base(), diffs, t}, GeneratorSet(gens), cfg);
    } else {
      if (cursor + static_cast<std::size_t>(batch) > order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      Batch b{Matrix(batch, pairs.d()), Matrix(batch, pairs.d()), Matrix(batch, t.cols())};
      for (Index i = 0; i < batch; ++i) {
        const Index row = order[cursor + static_cast<std::size_t>(i)];
        b.x.row(i) = pairs.base().row(row);
        b.diffs.row(i) = diffs.row(row);
        b.t.row(i) = t.row(row);
      }
      NonconvexGradient sub = batch_gradient(b, GeneratorSet(gens), cfg);
      g.t = Matrix::Zero(t.rows(), t.cols());
      for (Index i = 0; i < batch; ++i) g.t.row(order[cursor + static_cast<std::size_t>(i)]) = sub.t.row(i);
      const double scale = static_cast<double>(n) / static_cast<double>(batch);
      for (auto& ga : sub.generators) ga *= scale;
      g.generators = std::move(sub.generators);
      cursor += static_cast<std::size_t>(batch);
      epoch_end = cursor + static_cast<std::size_t>(batch) > order.size();
    }

    t += adagrad_step(t_state, g.t);
    for (std::size_t k = 0; k < gens.size(); ++k) gens[k] += adagrad_step(a_state[k], g.generators[k]);

    const double prev = obj;
    obj = full_objective();
    if (!std::isfinite(obj) || (initial > 0.0 && obj > 1e3 * initial)) {
      throw DivergenceError("nonconvex solver diverged at iteration " + std::to_string(it) +
                            "; try a smaller step size");
    }
    run.trace.push_back(obj);
    if (epoch_end) {
      const double ref = full_batch ? prev : epoch_ref;
      if (std::abs(ref - obj) <= cfg.tol * std::max(std::abs(ref), std::numeric_limits<double>::min())) {
        break;
      }
      epoch_ref = obj;
    }
  }
  run.t = std::move(t);
  run.gens = std::move(gens);
  run.objective = obj;
  return run;
}

}  // namespace

double nonconvex_objective(const PairSet& pairs, const Matrix& t, const GeneratorSet& gens,
                           const SolverConfig& cfg) {
  check_shapes(pairs, t, gens);
  Batch b{pairs.base(), pairs.differences(), t};
  return loss_sum(residual(b, transformed(b.x, gens)), cfg);
}

NonconvexGradient nonconvex_gradient(const PairSet& pairs, const Matrix& t,
                                     const GeneratorSet& gens, const SolverConfig& cfg) {
  check_shapes(pairs, t, gens);
  return batch_gradient({pairs.base(), pairs.differences(), t}, gens, cfg);
}

NonconvexSolution solve_nonconvex(const PairSet& pairs, Index K, const SolverConfig& cfg,
                                  const std::optional<NonconvexInit>& init) {
  cfg.validate();
  if (K < 1) throw InvalidInput("solve_nonconvex: K must be >= 1");
  const Index n = pairs.n();
  const Index d = pairs.d();

  NonconvexSolution best;
  bool have_best = false;
  auto consider = [&](Run run) {
    best.restart_objectives.push_back(run.objective);
    if (!have_best || run.objective < best.objective) {
      best.t = std::move(run.t);
      best.generators = GeneratorSet(std::move(run.gens));
      best.objective = run.objective;
      best.objective_trace = std::move(run.trace);
      have_best = true;
    }
  };

  if (init) {
    if (static_cast<Index>(init->generators.K()) != K) throw InvalidInput("solve_nonconvex: init has wrong K");
    check_shapes(pairs, init->t, init->generators);
    consider(descend(pairs, init->t, init->generators.generators(), cfg));
    return best;
  }

  for (int rs = 0; rs < cfg.restarts; ++rs) {
    auto rng = make_rng(cfg.seed, 100 + static_cast<std::uint64_t>(rs));
    std::normal_distribution<double> gen_entry(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
    std::normal_distribution<double> strength(0.0, 0.1);
    std::vector<Matrix> gens;
    for (Index k = 0; k < K; ++k) {
      Matrix a(d, d);
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) a(i, j) = gen_entry(rng);
      gens.push_back(std::move(a));
    }
    Matrix t(n, K);
    for (Index i = 0; i < n; ++i)
      for (Index k = 0; k < K; ++k) t(i, k) = strength(rng);
    consider(descend(pairs, std::move(t), std::move(gens), cfg));
  }
  return best;
}

}  // namespace lietrans
