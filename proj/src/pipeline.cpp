#include "lietrans/pipeline.hpp"

#include "lietrans/disentangle.hpp"
#include "lietrans/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lietrans {

std::string to_string(Method m) {
  switch (m) {
    case Method::convex: return "convex";
    case Method::convex_gradient: return "convex+gradient";
    case Method::nonconvex: return "nonconvex";
  }
  return "unknown";
}

Method method_from_string(const std::string& s) {
  if (s == "convex") return Method::convex;
  if (s == "convex+gradient" || s == "convex_gradient") return Method::convex_gradient;
  if (s == "nonconvex") return Method::nonconvex;
  throw InvalidInput("unknown method '" + s + "' (expected convex, convex+gradient or nonconvex)");
}

void balance(Matrix& t, std::vector<Matrix>& gens) {
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const auto kk = static_cast<Index>(k);
    const double tn = t.col(kk).norm();
    const double an = gens[k].norm();
    if (tn == 0.0 || an == 0.0) continue;
    const double c = std::sqrt(an / tn);
    t.col(kk) *= c;
    gens[k] /= c;
  }
}

double model_fit(const PairSet& pairs, const Matrix& t, const GeneratorSet& gens) {
  SolverConfig sq;
  sq.loss = LossKind::squared;
  return nonconvex_objective(pairs, t, gens, sq);
}

namespace {

struct ConvexStage {
  AlphaSolution alpha;
  Reconstruction rec;
  double lambda = 0.0;
  std::vector<double> fits;
};

ConvexStage run_convex(const PairSet& pairs, const LearnOptions& opts) {
  const Index r = opts.samples ? *opts.samples : std::min<Index>(pairs.n(), 5000);
  std::vector<double> lambdas = opts.lambdas;
  if (lambdas.empty()) lambdas.push_back(opts.convex.lambda);

  ConvexStage best;
  double best_fit = std::numeric_limits<double>::infinity();
  bool have = false;
  for (double lambda : lambdas) {
    SolverConfig cfg = opts.convex;
    cfg.lambda = lambda;
    cfg.K = opts.K;
    AlphaSolution sol = solve_sampled_convex(pairs, r, cfg);
    Reconstruction rec = reconstruct_generators(sol, pairs, opts.K);
    const double fit = model_fit(pairs, rec.strengths, rec.generators);
    best.fits.push_back(fit);
    if (!have || fit < best_fit) {
      best_fit = fit;
      best.alpha = std::move(sol);
      best.rec = std::move(rec);
      best.lambda = lambda;
      have = true;
    }
  }
  return best;
}

void finish(LearnResult& out, Matrix t, GeneratorSet gens, bool do_disentangle) {
  const bool vanishes = std::all_of(gens.generators().begin(), gens.generators().end(),
                                    [](const Matrix& a) { return a.isZero(0.0); });
  if (vanishes) out.warning += (out.warning.empty() ? "" : "; ") + std::string("all learned generators are zero");
  if (do_disentangle && !vanishes) {
    DisentangledSet dis = disentangle(t, gens);
    if (dis.generators.K() == gens.K()) {
      out.generators = std::move(dis.generators);
      out.strengths = std::move(dis.strengths);
      return;
    }
    out.warning += (out.warning.empty() ? "" : "; ") + dis.warning + "; kept the entangled set";
  }
  out.generators = std::move(gens);
  out.strengths = std::move(t);
}

}  // namespace

LearnResult learn(const PairSet& pairs, const LearnOptions& opts) {
  if (opts.K < 1) throw InvalidInput("learn: K must be >= 1");
  LearnResult out;
  switch (opts.method) {
    case Method::convex: {
      ConvexStage c = run_convex(pairs, opts);
      out.chosen_lambda = c.lambda;
      out.lambda_fits = std::move(c.fits);
      out.objective_trace = c.alpha.objective_trace;
      out.warning = c.rec.warning;
      finish(out, std::move(c.rec.strengths), std::move(c.rec.generators), opts.disentangle);
      out.alpha = std::move(c.alpha);
      break;
    }
    case Method::convex_gradient: {
      ConvexStage c = run_convex(pairs, opts);
      out.chosen_lambda = c.lambda;
      out.lambda_fits = std::move(c.fits);
      out.warning = c.rec.warning;
      Matrix t = c.rec.strengths;
      std::vector<Matrix> gens = c.rec.generators.generators();
      balance(t, gens);
      NonconvexInit init{std::move(t), GeneratorSet(std::move(gens))};
      SolverConfig cfg = opts.gradient;
      cfg.K = opts.K;
      NonconvexSolution nc = solve_nonconvex(pairs, opts.K, cfg, init);
      out.objective_trace = c.alpha.objective_trace;
      out.objective_trace.insert(out.objective_trace.end(), nc.objective_trace.begin(), nc.objective_trace.end());
      out.restart_objectives = nc.restart_objectives;
      finish(out, std::move(nc.t), std::move(nc.generators), opts.disentangle);
      out.alpha = std::move(c.alpha);
      break;
    }
    case Method::nonconvex: {
      SolverConfig cfg = opts.gradient;
      cfg.K = opts.K;
      NonconvexSolution nc = solve_nonconvex(pairs, opts.K, cfg);
      out.objective_trace = nc.objective_trace;
      out.restart_objectives = nc.restart_objectives;
      finish(out, std::move(nc.t), std::move(nc.generators), opts.disentangle);
      break;
    }
  }
  return out;
}

}  // namespace lietrans
