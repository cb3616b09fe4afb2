#include "lietrans/error.hpp"
#include "lietrans/linalg.hpp"
#include "lietrans/solver.hpp"
#include "prox_internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lietrans {

// ---- config ----------------------------------------------------------------

void SolverConfig::validate() const {
  if (!(lambda >= 0.0)) throw InvalidInput("solver: lambda must be >= 0");
  if (!(step > 0.0)) throw InvalidInput("solver: step must be > 0");
  if (!(adagrad_delta > 0.0)) throw InvalidInput("solver: adagrad_delta must be > 0");
  if (!(smooth_eps > 0.0)) throw InvalidInput("solver: smooth_eps must be > 0");
  if (minibatch < 1) throw InvalidInput("solver: minibatch must be >= 1");
  if (iters < 1) throw InvalidInput("solver: iters must be >= 1");
  if (K < 1) throw InvalidInput("solver: K must be >= 1");
  if (svt.kind == SvtMode::Kind::randomized && svt.oversample < 5) {
    throw InvalidInput("solver: randomized SVT needs oversample >= 5");
  }
  if (svt.power_iters < 0) throw InvalidInput("solver: power iterations must be >= 0");
  if (tracenorm_rows && *tracenorm_rows < 1) throw InvalidInput("solver: tracenorm_rows must be >= 1");
  if (restarts < 1) throw InvalidInput("solver: restarts must be >= 1");
  if (!(tol >= 0.0)) throw InvalidInput("solver: tol must be >= 0");
}

nlohmann::json to_json(const SolverConfig& cfg) {
  nlohmann::json svt;
  switch (cfg.svt.kind) {
    case SvtMode::Kind::automatic: svt["kind"] = "automatic"; break;
    case SvtMode::Kind::exact: svt["kind"] = "exact"; break;
    case SvtMode::Kind::randomized: svt["kind"] = "randomized"; break;
  }
  svt["oversample"] = cfg.svt.oversample;
  svt["power_iters"] = cfg.svt.power_iters;
  nlohmann::json j = {{"loss", cfg.loss == LossKind::squared ? "squared" : "smoothed_norm"},
                      {"smooth_eps", cfg.smooth_eps},
                      {"lambda", cfg.lambda},
                      {"step", cfg.step},
                      {"adagrad_delta", cfg.adagrad_delta},
                      {"minibatch", cfg.minibatch},
                      {"iters", cfg.iters},
                      {"K", cfg.K},
                      {"svt_mode", svt},
                      {"restarts", cfg.restarts},
                      {"seed", cfg.seed},
                      {"tol", cfg.tol},
                      {"whiten", cfg.whiten}};
  j["tracenorm_rows"] = cfg.tracenorm_rows ? nlohmann::json(*cfg.tracenorm_rows) : nlohmann::json();
  return j;
}

SolverConfig solver_config_from_json(const nlohmann::json& j) {
  SolverConfig cfg;
  try {
    if (j.contains("loss")) {
      const auto loss = j.at("loss").get<std::string>();
      if (loss == "squared") cfg.loss = LossKind::squared;
      else if (loss == "smoothed_norm") cfg.loss = LossKind::smoothed_norm;
      else throw InvalidInput("solver: unknown loss '" + loss + "'");
    }
    cfg.smooth_eps = j.value("smooth_eps", cfg.smooth_eps);
    cfg.lambda = j.value("lambda", cfg.lambda);
    cfg.step = j.value("step", cfg.step);
    cfg.adagrad_delta = j.value("adagrad_delta", cfg.adagrad_delta);
    cfg.minibatch = j.value("minibatch", cfg.minibatch);
    cfg.iters = j.value("iters", cfg.iters);
    cfg.K = j.value("K", cfg.K);
    if (j.contains("svt_mode")) {
      const auto& s = j.at("svt_mode");
      const auto kind = s.is_string() ? s.get<std::string>() : s.value("kind", std::string("automatic"));
      if (kind == "automatic") cfg.svt.kind = SvtMode::Kind::automatic;
      else if (kind == "exact") cfg.svt.kind = SvtMode::Kind::exact;
      else if (kind == "randomized") cfg.svt.kind = SvtMode::Kind::randomized;
      else throw InvalidInput("solver: unknown svt_mode '" + kind + "'");
      if (s.is_object()) {
        cfg.svt.oversample = s.value("oversample", cfg.svt.oversample);
        cfg.svt.power_iters = s.value("power_iters", cfg.svt.power_iters);
      }
    }
    if (j.contains("tracenorm_rows") && !j.at("tracenorm_rows").is_null()) {
      cfg.tracenorm_rows = j.at("tracenorm_rows").get<Index>();
    }
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.svt.seed = cfg.seed;
    cfg.tol = j.value("tol", cfg.tol);
    cfg.whiten = j.value("whiten", cfg.whiten);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("solver config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

// ---- weight solutions ------------------------------------------------------

Matrix AlphaSolution::dense_alpha() const {
  if (alpha.size() > 0 || !factors) return alpha;
  return factors->left * factors->right.transpose();
}

Index AlphaSolution::rows() const {
  if (alpha.size() > 0 || !factors) return alpha.rows();
  return factors->left.rows();
}

// ---- atom regression -------------------------------------------------------

namespace {

Matrix residuals(const AtomProblem& p, const Matrix& alpha) {
  return alpha.cwiseProduct(p.coupling) * p.atoms - p.targets;
}

double loss_sum(const Matrix& res, const SolverConfig& cfg) {
  if (cfg.loss == LossKind::squared) return res.squaredNorm();
  return (res.rowwise().squaredNorm().array() + cfg.smooth_eps).sqrt().sum();
}

// Row-wise derivative of the loss with respect to the residual.
Matrix loss_derivative(const Matrix& res, const SolverConfig& cfg) {
  if (cfg.loss == LossKind::squared) return 2.0 * res;
  Vector scale = (res.rowwise().squaredNorm().array() + cfg.smooth_eps).sqrt().inverse();
  return scale.asDiagonal() * res;
}

Matrix gather_rows(const Matrix& m, std::span<const Index> rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

double penalty(const Matrix& alpha, double exact_norm, const SolverConfig& cfg) {
  if (cfg.tracenorm_rows && *cfg.tracenorm_rows < alpha.rows()) {
    // ‖α‖_* ≈ √n · ‖Y‖_*/√L for L sampled rows.
    return std::sqrt(static_cast<double>(alpha.rows())) *
           subsampled_trace_norm(alpha, *cfg.tracenorm_rows, cfg.seed);
  }
  return exact_norm;
}

}  // namespace

double atom_data_fit(const AtomProblem& p, const Matrix& alpha, const SolverConfig& cfg) {
  return loss_sum(residuals(p, alpha), cfg);
}

double atom_objective(const AtomProblem& p, const Matrix& alpha, const SolverConfig& cfg) {
  double obj = atom_data_fit(p, alpha, cfg);
  if (cfg.lambda > 0.0) obj += cfg.lambda * trace_norm(alpha);
  return obj;
}

Matrix atom_gradient(const AtomProblem& p, const Matrix& alpha, const SolverConfig& cfg) {
  const Matrix dl = loss_derivative(residuals(p, alpha), cfg);
  return p.coupling.cwiseProduct(dl * p.atoms.transpose());
}

AtomFit fit_atom_weights(const AtomProblem& p, const SolverConfig& cfg) {
  cfg.validate();
  const Index n = p.coupling.rows();
  const Index r = p.coupling.cols();
  if (p.atoms.rows() != r || p.targets.rows() != n || p.atoms.cols() != p.targets.cols()) {
    throw InvalidInput("fit_atom_weights: inconsistent problem shapes");
  }

  Matrix alpha = Matrix::Zero(n, r);
  AdagradState state(n, r, cfg.step, cfg.adagrad_delta);
  const Index batch = std::min(cfg.minibatch, n);
  const bool full_batch = batch >= n;

  double fit = atom_data_fit(p, alpha, cfg);
  double norm = 0.0;
  double obj = fit;
  const double initial = obj;

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  auto rng = make_rng(cfg.seed, 2);
  std::size_t cursor = order.size();
  double epoch_ref = obj;

  AtomFit out;
  out.objective_trace.reserve(static_cast<std::size_t>(cfg.iters));
  for (int it = 0; it < cfg.iters; ++it) {
    Matrix grad;
    bool epoch_end = full_batch;
    if (full_batch) {
      grad = atom_gradient(p, alpha, cfg);
    } else {
      if (cursor + static_cast<std::size_t>(batch) > order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      std::span<const Index> rows(order.data() + cursor, static_cast<std::size_t>(batch));
      cursor += static_cast<std::size_t>(batch);
      epoch_end = cursor + static_cast<std::size_t>(batch) > order.size();
      AtomProblem sub{gather_rows(p.coupling, rows), p.atoms, gather_rows(p.targets, rows)};
      const Matrix g = atom_gradient(sub, gather_rows(alpha, rows), cfg) *
                       (static_cast<double>(n) / static_cast<double>(batch));
      grad = Matrix::Zero(n, r);
      for (std::size_t i = 0; i < rows.size(); ++i) grad.row(rows[i]) = g.row(static_cast<Index>(i));
    }

    const Matrix update = adagrad_step(state, grad);
    const double eta = state.effective_step();
    double cand_norm = 0.0;
    Matrix cand = cfg.lambda > 0.0
                      ? detail::prox_trace_norm(alpha + update, cfg.lambda * eta, cfg.svt, cfg.K, cand_norm)
                      : Matrix(alpha + update);
    double cand_fit = atom_data_fit(p, cand, cfg);
    double cand_obj = cand_fit + cfg.lambda * cand_norm;

    if (full_batch && !(cand_obj <= obj)) {
      // Backtracking proximal gradient step; falls back to staying put.
      bool accepted = false;
      double s = eta;
      for (int tries = 0; tries < 60 && !accepted; ++tries, s *= 0.5) {
        cand = cfg.lambda > 0.0
                   ? detail::prox_trace_norm(alpha - s * grad, cfg.lambda * s, cfg.svt, cfg.K, cand_norm)
                   : Matrix(alpha - s * grad);
        cand_fit = atom_data_fit(p, cand, cfg);
        const Matrix diff = cand - alpha;
        const double model = fit + grad.cwiseProduct(diff).sum() + diff.squaredNorm() / (2.0 * s);
        cand_obj = cand_fit + cfg.lambda * cand_norm;
        accepted = cand_fit <= model && cand_obj <= obj;
      }
      if (!accepted) {
        cand = alpha;
        cand_fit = fit;
        cand_norm = norm;
        cand_obj = obj;
      }
    }

    if (!std::isfinite(cand_obj) || (initial > 0.0 && cand_obj > 1e3 * initial)) {
      throw DivergenceError("solver diverged at iteration " + std::to_string(it) +
                            " (objective " + std::to_string(cand_obj) +
                            "); try a smaller step size");
    }

    const double prev = obj;
    alpha = std::move(cand);
    fit = cand_fit;
    norm = cand_norm;
    obj = cand_obj;
    out.objective_trace.push_back(fit + cfg.lambda * penalty(alpha, norm, cfg));

    if (epoch_end) {
      const double ref = full_batch ? prev : epoch_ref;
      if (std::abs(ref - obj) <= cfg.tol * std::max(std::abs(ref), std::numeric_limits<double>::min())) {
        break;
      }
      epoch_ref = obj;
    }
  }
  out.alpha = std::move(alpha);
  return out;
}

// ---- subsampled solver ----------------------------------------------------

AlphaSolution solve_sampled_convex(const PairSet& pairs, Index r, const SolverConfig& cfg) {
  const Index n = pairs.n();
  if (r < 1 || r > n) throw InvalidInput("solve_sampled_convex: need 1 <= r <= n");
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  if (r < n) {
    auto rng = make_rng(cfg.seed, 3);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(static_cast<std::size_t>(r));
  }
  return solve_sampled_convex(pairs, idx, cfg);
}

AlphaSolution solve_sampled_convex(const PairSet& pairs, std::span<const Index> samples,
                                   const SolverConfig& cfg) {
  cfg.validate();
  if (samples.empty()) throw InvalidInput("solve_sampled_convex: no samples");
  for (Index j : samples) {
    if (j < 0 || j >= pairs.n()) throw InvalidInput("solve_sampled_convex: sample index out of range");
  }

  Matrix x = pairs.base();
  Matrix xbar = pairs.neighbor();
  AlphaSolution sol;
  if (cfg.whiten) {
    Dataset ds(x);
    Whitened w = whiten(ds, default_whiten_ridge(ds));
    x = w.data.points();
    xbar = w.transform.apply(xbar);
    sol.whitening = std::move(w.transform);
    sol.whitened_space = true;
  }
  const Matrix diffs = xbar - x;
  const Matrix xs = gather_rows(x, samples);

  AtomProblem problem{x * xs.transpose(), gather_rows(diffs, samples), diffs};
  AtomFit fit = fit_atom_weights(problem, cfg);

  sol.alpha = std::move(fit.alpha);
  sol.sample_idx.assign(samples.begin(), samples.end());
  sol.objective_trace = std::move(fit.objective_trace);
  sol.config = cfg;
  return sol;
}

AlphaSolution closed_form_weights(const PairSet& pairs, const WhitenTransform* whiten) {
  if (pairs.provenance() != Provenance::synthetic || !pairs.strengths()) {
    throw InvalidInput("closed_form_weights: needs synthetic pairs with known strengths");
  }
  const Matrix& t = *pairs.strengths();
  const Index r = pairs.n();
  const Index K = t.cols();
  Matrix right(r, K);
  if (K == 1) {
    for (Index j = 0; j < r; ++j) {
      if (t(j, 0) == 0.0) {
        throw InvalidInput("closed_form_weights: strength t_" + std::to_string(j) +
                           " is zero (division by zero)");
      }
      right(j, 0) = 1.0 / (static_cast<double>(r) * t(j, 0));
    }
  } else {
    for (Index k = 0; k < K; ++k) {
      const double sigma2 = t.col(k).squaredNorm() / static_cast<double>(r);
      if (!(sigma2 > 0.0)) {
        throw InvalidInput("closed_form_weights: strength column " + std::to_string(k) +
                           " has zero second moment");
      }
      right.col(k) = t.col(k) / (sigma2 * static_cast<double>(r));
    }
  }

  AlphaSolution sol;
  sol.factors = WeightFactors{t, std::move(right)};
  sol.sample_idx.resize(static_cast<std::size_t>(r));
  std::iota(sol.sample_idx.begin(), sol.sample_idx.end(), Index{0});
  sol.config.K = K;
  if (whiten) sol.whitening = *whiten;
  return sol;
}

}  // namespace lietrans
