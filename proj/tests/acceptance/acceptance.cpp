// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: lietrans_acceptance [criterion ...]   (default: all)

#include "lietrans/cli.hpp"
#include "lietrans/disentangle.hpp"
#include "lietrans/embedding.hpp"
#include "lietrans/eval.hpp"
#include "lietrans/io.hpp"
#include "lietrans/kernel.hpp"
#include "lietrans/linalg.hpp"
#include "lietrans/neighbors.hpp"
#include "lietrans/pipeline.hpp"
#include "lietrans/solver.hpp"
#include "lietrans/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace lietrans;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix gaussian(Index rows, Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

// d = 10 isotropic points, random A*, first-order pairs.
SyntheticPairs single_transform_instance(std::uint64_t seed) {
  auto rng = make_rng(1000 + seed, 9);
  SyntheticSpec spec;
  spec.kind = {TransformSpec{TransformKind::custom, gaussian(10, 10, rng, 1.0 / std::sqrt(10.0))}};
  spec.K = 1;
  spec.n = 40;
  spec.seed = seed;
  return generate_pairs(spec, make_base_dataset(spec));
}

PairSet hide_strengths(const PairSet& p) {
  return PairSet(p.base(), p.neighbor(), Provenance::nearest_neighbor);
}

SyntheticPairs image_instance(int K, std::uint64_t seed) {
  SyntheticSpec spec;
  if (K == 1) {
    spec.kind = {TransformSpec{TransformKind::translate_h, {}}};
  } else {
    spec.kind = {TransformSpec{TransformKind::image_rotation, {}},
                 TransformSpec{TransformKind::translate_h, {}},
                 TransformSpec{TransformKind::translate_v, {}}};
  }
  spec.K = K;
  spec.n = 50;
  spec.side = 8;
  spec.seed = seed;
  return generate_pairs(spec, make_base_dataset(spec));
}

// Shared protocol for the 8×8 image comparisons. With 50 images in 64
// dimensions the data cannot be whitened, so the convex stage runs raw.
LearnOptions image_protocol(int K, std::uint64_t seed) {
  LearnOptions o;
  o.K = K;
  o.convex.step = 0.01;
  o.convex.iters = 500;
  o.convex.whiten = false;
  o.convex.tol = 0.0;
  o.gradient.step = 0.05;
  o.gradient.iters = 1000;
  o.gradient.tol = 0.0;
  o.gradient.restarts = 5;
  o.gradient.seed = seed;
  o.lambdas = {0.1, 1.0, 10.0, 100.0, 1000.0};
  return o;
}

// ---- criteria ---------------------------------------------------------------

Outcome exact_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  int ok = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SyntheticPairs sp = single_transform_instance(seed);
    const Whitened w = whiten(Dataset(sp.pairs.base()), 0.0);
    const AlphaSolution sol = closed_form_weights(sp.pairs, &w.transform);
    const Reconstruction rec = reconstruct_generators(sol, sp.pairs, 1);
    const double err = matched_error(rec.generators, sp.truth).total;
    worst = std::max(worst, err);
    ok += err <= 1e-8;
  }
  const double secs = seconds_since(t0);
  return {ok == 20 && secs < 5.0,
          std::to_string(ok) + "/20 seeds <= 1e-8, worst " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome convex_gradient_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SyntheticPairs sp = single_transform_instance(seed);
    LearnOptions o;
    o.method = Method::convex_gradient;
    o.K = 1;
    o.convex.step = 0.01;
    o.convex.iters = 500;
    o.convex.minibatch = 40;
    o.convex.tol = 0.0;
    o.gradient.step = 0.05;
    o.gradient.iters = 2000;
    o.gradient.minibatch = 40;
    o.gradient.tol = 0.0;
    o.lambdas = {1e-2, 1e-4, 1e-6};
    const LearnResult res = learn(hide_strengths(sp.pairs), o);
    ok += matched_error(res.generators, sp.truth).total <= 1e-3;
  }
  const double secs = seconds_since(t0);
  return {ok >= 18 && secs < 60.0, std::to_string(ok) + "/20 seeds <= 1e-3, " + fmt(secs) + " s"};
}

Outcome translation_spread() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> cg;
  std::vector<double> nc;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SyntheticPairs sp = image_instance(1, seed);
    const PairSet pairs = hide_strengths(sp.pairs);
    LearnOptions o = image_protocol(1, seed);
    o.method = Method::convex_gradient;
    cg.push_back(matched_error(learn(pairs, o).generators, sp.truth).total);
    o.method = Method::nonconvex;
    nc.push_back(matched_error(learn(pairs, o).generators, sp.truth).total);
  }
  const double secs = seconds_since(t0);
  const bool spread_ok = spread(cg) < 0.1 * spread(nc);
  const bool median_ok = median(cg) <= median(nc);
  return {spread_ok && median_ok && secs < 600.0,
          "spread cg " + fmt(spread(cg)) + " vs nonconvex " + fmt(spread(nc)) + (spread_ok ? " ok" : " too wide") +
              ", median cg " + fmt(median(cg)) + " vs " + fmt(median(nc)) + (median_ok ? " ok" : " worse") + ", " +
              fmt(secs) + " s"};
}

Outcome multi_transform_ablation() {
  const auto t0 = std::chrono::steady_clock::now();
  int cg_wins = 0;
  int svd_helps = 0;
  std::ostringstream rows;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SyntheticPairs sp = image_instance(3, seed);
    const PairSet pairs = hide_strengths(sp.pairs);
    LearnOptions o = image_protocol(3, seed);
    o.method = Method::convex_gradient;
    const double cg = matched_error(learn(pairs, o).generators, sp.truth).total;
    o.method = Method::nonconvex;
    const double nc = matched_error(learn(pairs, o).generators, sp.truth).total;
    o.disentangle = false;
    const double raw = matched_error(learn(pairs, o).generators, sp.truth).total;
    cg_wins += cg <= nc;
    svd_helps += raw > nc;
    rows << " [" << fmt(cg) << " " << fmt(nc) << " " << fmt(raw) << "]";
  }
  const double secs = seconds_since(t0);
  return {cg_wins >= 4 && svd_helps >= 4 && secs < 1200.0,
          "cg <= nonconvex " + std::to_string(cg_wins) + "/5, no-svd worse " + std::to_string(svd_helps) +
              "/5, [cg nc no-svd]" + rows.str() + ", " + fmt(secs) + " s"};
}

Outcome disentangle_properties() {
  double recon = 0.0;
  double ortho = 0.0;
  double cross = 0.0;
  for (std::uint64_t inst = 0; inst < 50; ++inst) {
    auto rng = make_rng(inst, 5);
    const Matrix t = gaussian(200, 4, rng);
    std::vector<Matrix> a;
    for (int k = 0; k < 4; ++k) a.push_back(gaussian(9, 9, rng));
    const DisentangledSet ds = disentangle(t, GeneratorSet(a));

    Matrix z = Matrix::Zero(200, 81);
    Matrix zhat = Matrix::Zero(200, 81);
    const Matrix tc = t.rowwise() - t.colwise().mean();
    for (int k = 0; k < 4; ++k) z += tc.col(k) * vec(a[static_cast<std::size_t>(k)]).transpose();
    for (std::size_t k = 0; k < ds.generators.K(); ++k)
      zhat += ds.strengths.col(static_cast<Index>(k)) * vec(ds.generators[k]).transpose();
    recon = std::max(recon, (z - zhat).norm() / z.norm());
    const Index K = ds.strengths.cols();
    ortho = std::max(ortho, (ds.strengths.transpose() * ds.strengths - Matrix::Identity(K, K)).cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < ds.generators.K(); ++i)
      for (std::size_t j = 0; j < ds.generators.K(); ++j)
        if (i != j) cross = std::max(cross, std::abs((ds.generators[i].transpose() * ds.generators[j]).trace()));
  }
  return {recon <= 1e-8 && ortho <= 1e-10 && cross <= 1e-10,
          "max relative reconstruction " + fmt(recon) + ", |t^T t - I| " + fmt(ortho) + ", |tr(Ai^T Aj)| " +
              fmt(cross) + " over 50 instances"};
}

Outcome sample_size_trend() {
  const std::vector<Index> sizes = {500, 2000, 5000};
  std::vector<double> mean_err;
  for (Index r : sizes) {
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      SyntheticSpec spec;
      spec.kind = {TransformSpec{TransformKind::image_rotation, {}}, TransformSpec{TransformKind::translate_h, {}},
                   TransformSpec{TransformKind::translate_v, {}}};
      spec.K = 3;
      spec.side = 8;
      spec.n = static_cast<int>(r);
      spec.seed = seed;
      // Isotropic points on the 8×8 grid: smooth images have a second-moment
      // condition number near 1e6, which swamps the estimator at these sizes.
      auto rng = make_rng(seed, 6);
      const Dataset base(gaussian(r, 64, rng), 8);
      const SyntheticPairs sp = generate_pairs(spec, base);
      const Whitened w = whiten(base, default_whiten_ridge(base));
      const AlphaSolution sol = closed_form_weights(sp.pairs, &w.transform);
      sum += matched_error(reconstruct_generators(sol, sp.pairs, 3).generators, sp.truth).total;
    }
    mean_err.push_back(sum / 10.0);
  }
  const bool ok = mean_err[0] > mean_err[1] && mean_err[1] > mean_err[2];
  return {ok, "mean error r=500 " + fmt(mean_err[0]) + ", r=2000 " + fmt(mean_err[1]) + ", r=5000 " + fmt(mean_err[2])};
}

Outcome tracenorm_estimator() {
  auto rng = make_rng(7, 0);
  const Matrix x = gaussian(2000, 5, rng) * gaussian(5, 50, rng);
  const double truth = trace_norm(x) / std::sqrt(2000.0);
  int ok = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double rel = std::abs(subsampled_trace_norm(x, 200, seed) - truth) / truth;
    worst = std::max(worst, rel);
    ok += rel <= 0.05;
  }
  return {ok >= 95, std::to_string(ok) + "/100 seeds within 5%, worst " + fmt(worst)};
}

double relative_gap(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

Outcome solver_numerics() {
  int monotone = 0;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    auto rng = make_rng(inst, 8);
    const Matrix base = gaussian(30, 5, rng);
    const PairSet pairs(base, base + gaussian(30, 5, rng, 0.1), Provenance::nearest_neighbor);
    SolverConfig cfg;
    cfg.lambda = 0.05;
    cfg.minibatch = 30;
    cfg.iters = 300;
    cfg.tol = 0.0;
    cfg.seed = inst;
    const AlphaSolution sol = solve_sampled_convex(pairs, 30, cfg);
    bool ok = true;
    for (std::size_t i = 1; i < sol.objective_trace.size(); ++i) ok = ok && sol.objective_trace[i] <= sol.objective_trace[i - 1];
    monotone += ok;
  }

  // Central differences on small problems, both losses.
  auto rng = make_rng(3, 8);
  const AtomProblem p{gaussian(8, 6, rng), gaussian(6, 4, rng), gaussian(8, 4, rng)};
  const Matrix alpha = gaussian(8, 6, rng);
  const Matrix base = gaussian(8, 4, rng);
  const PairSet pairs(base, base + gaussian(8, 4, rng), Provenance::nearest_neighbor);
  const Matrix t = gaussian(8, 2, rng);
  const std::vector<Matrix> gens = {gaussian(4, 4, rng), gaussian(4, 4, rng)};
  constexpr double h = 1e-6;
  double worst = 0.0;
  for (LossKind loss : {LossKind::squared, LossKind::smoothed_norm}) {
    SolverConfig cfg;
    cfg.loss = loss;
    cfg.K = 2;

    Matrix fd(alpha.rows(), alpha.cols());
    for (Index i = 0; i < alpha.rows(); ++i)
      for (Index j = 0; j < alpha.cols(); ++j) {
        Matrix up = alpha, dn = alpha;
        up(i, j) += h;
        dn(i, j) -= h;
        fd(i, j) = (atom_data_fit(p, up, cfg) - atom_data_fit(p, dn, cfg)) / (2 * h);
      }
    worst = std::max(worst, relative_gap(atom_gradient(p, alpha, cfg), fd));

    const NonconvexGradient g = nonconvex_gradient(pairs, t, GeneratorSet(gens), cfg);
    Matrix fdt(t.rows(), t.cols());
    for (Index i = 0; i < t.rows(); ++i)
      for (Index k = 0; k < t.cols(); ++k) {
        Matrix up = t, dn = t;
        up(i, k) += h;
        dn(i, k) -= h;
        fdt(i, k) = (nonconvex_objective(pairs, up, GeneratorSet(gens), cfg) -
                     nonconvex_objective(pairs, dn, GeneratorSet(gens), cfg)) / (2 * h);
      }
    worst = std::max(worst, relative_gap(g.t, fdt));
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Matrix fda(4, 4);
      for (Index a = 0; a < 4; ++a)
        for (Index b = 0; b < 4; ++b) {
          std::vector<Matrix> up = gens, dn = gens;
          up[k](a, b) += h;
          dn[k](a, b) -= h;
          fda(a, b) = (nonconvex_objective(pairs, t, GeneratorSet(up), cfg) -
                       nonconvex_objective(pairs, t, GeneratorSet(dn), cfg)) / (2 * h);
        }
      worst = std::max(worst, relative_gap(g.generators[k], fda));
    }
  }
  return {monotone == 20 && worst <= 1e-4,
          std::to_string(monotone) + "/20 monotone traces, worst gradient gap " + fmt(worst)};
}

Outcome full_convex_agreement() {
  SyntheticSpec spec;
  spec.kind = {TransformSpec{TransformKind::rotation2d, {}}};
  spec.K = 1;
  spec.n = 10;
  spec.seed = 0;
  const Whitened w = whiten(make_base_dataset(spec), 0.0);
  const PairSet pairs = hide_strengths(generate_pairs(spec, w.data).pairs);
  constexpr double lambda = 1e-5;

  SolverConfig full;
  full.lambda = lambda;
  full.iters = 200000;
  full.tol = 0.0;
  const Matrix z = solve_full_convex(pairs, full);

  SolverConfig sampled;
  sampled.lambda = lambda;
  sampled.step = 1.0;
  sampled.iters = 200000;
  sampled.minibatch = 10;
  sampled.tol = 0.0;
  sampled.whiten = false;
  const AlphaSolution sol = solve_sampled_convex(pairs, 10, sampled);
  const Matrix alpha = sol.dense_alpha();
  const Matrix diffs = pairs.differences();

  double worst = 0.0;
  for (Index i = 0; i < pairs.n(); ++i) {
    Matrix est = Matrix::Zero(2, 2);
    for (std::size_t j = 0; j < sol.sample_idx.size(); ++j) {
      const Index s = sol.sample_idx[j];
      est += alpha(i, static_cast<Index>(j)) * diffs.row(s).transpose() * pairs.base().row(s);
    }
    const Matrix zi = mat(z.row(i).transpose());
    const Matrix a = zi / operator_norm(zi);
    const Matrix b = est / operator_norm(est);
    worst = std::max(worst, std::min(operator_norm(a - b), operator_norm(a + b)));
  }
  return {worst <= 1e-3, "max row disagreement " + fmt(worst) + " at lambda " + fmt(lambda)};
}

Outcome kernel_circle() {
  const CircleSample held = sample_circle(200, 0, 1);
  auto score = [&](Index r) {
    const CircleSample train = sample_circle(r, 0, 0);
    const KernelModel m = fit_kernel(k_distinct_neighbors(Dataset(train.points), 1), KernelOptions{}, SolverConfig{});
    return score_field(predict_fields(m, held.points), held.tangents);
  };
  const FieldScore big = score(200);
  const FieldScore small = score(50);
  return {big.mean_cosine >= 0.9 && big.mean_error < small.mean_error,
          "cosine r=200 " + fmt(big.mean_cosine) + ", mean error r=200 " + fmt(big.mean_error) + " vs r=50 " +
              fmt(small.mean_error)};
}

std::vector<double> ranks(const Vector& v) {
  std::vector<Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return v(a) < v(b); });
  std::vector<double> r(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) r[static_cast<std::size_t>(order[i])] = static_cast<double>(i);
  return r;
}

Outcome mst_embedding() {
  auto rng = make_rng(11, 0);
  const Vector axis = gaussian(3, 1, rng).col(0).normalized();
  Matrix a(3, 3);
  a << 0, -axis(2), axis(1), axis(2), 0, -axis(0), -axis(1), axis(0), 0;
  const Vector x0 = gaussian(3, 1, rng).col(0);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  Vector t(100);
  for (Index i = 0; i < 100; ++i) t(i) = unif(rng);
  Matrix pts(100, 3);
  for (Index i = 0; i < 100; ++i) pts.row(i) = (matrix_exp(a, t(i)) * x0).transpose();
  const TreeEmbedding emb = embed(Dataset(pts), GeneratorSet({a}));

  const std::vector<double> rt = ranks(t);
  const std::vector<double> re = ranks(emb.coords.col(0));
  const double mean = 49.5;
  double num = 0.0, den_t = 0.0, den_e = 0.0;
  for (std::size_t i = 0; i < rt.size(); ++i) {
    num += (rt[i] - mean) * (re[i] - mean);
    den_t += (rt[i] - mean) * (rt[i] - mean);
    den_e += (re[i] - mean) * (re[i] - mean);
  }
  const double rho = num / std::sqrt(den_t * den_e);
  return {std::abs(rho) >= 0.95, "spearman rho " + fmt(rho)};
}

// Runs one CLI invocation three times into the same place and compares CSV hashes.
std::map<std::string, std::size_t> csv_hashes(const fs::path& out) {
  std::map<std::string, std::size_t> h;
  auto add = [&](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    h[p.filename().string()] = std::hash<std::string>{}(buf.str());
  };
  if (fs::is_directory(out)) {
    for (const auto& e : fs::directory_iterator(out))
      if (e.path().extension() == ".csv") add(e.path());
  } else if (fs::exists(out)) {
    add(out);
  }
  return h;
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lietrans");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

Outcome reproducibility() {
  const fs::path root = fs::temp_directory_path() / "lietrans_acceptance_repro";
  fs::remove_all(root);
  fs::create_directories(root);
  auto p = [&](const std::string& name) { return (root / name).string(); };

  SyntheticSpec spec;
  spec.kind = {TransformSpec{TransformKind::translate_h, {}}};
  spec.side = 4;
  spec.K = 1;
  spec.n = 20;
  spec.seed = 3;
  io::write_json(root / "spec.json", io::spec_to_json(spec));
  io::write_json(root / "learn.json", {{"convex", {{"iters", 60}, {"step", 0.01}}},
                                       {"gradient", {{"iters", 60}, {"restarts", 2}}},
                                       {"lambdas", {0.1, 0.01}}});
  io::write_json(root / "kernel.json", {{"solver", {{"iters", 200}}}});

  struct Step {
    std::string name;
    std::vector<std::string> args;
    std::string out;
  };
  const std::vector<Step> steps = {
      {"gen", {"gen", "--config", p("spec.json"), "--out", p("data")}, p("data")},
      {"learn convex", {"learn", "--data", p("data"), "--config", p("learn.json"), "--method", "convex", "--out", p("c")}, p("c")},
      {"learn convex+gradient",
       {"learn", "--data", p("data"), "--config", p("learn.json"), "--method", "convex+gradient", "--out", p("cg")},
       p("cg")},
      {"learn nonconvex",
       {"learn", "--data", p("data"), "--config", p("learn.json"), "--method", "nonconvex", "--seed", "5", "--out", p("nc")},
       p("nc")},
      {"eval", {"eval", "--batch", p("batch.json"), "--out", p("batch.csv")}, p("batch.csv")},
      {"apply", {"apply", "--gens", p("cg"), "--image", p("image.csv"), "--steps", "2", "--eta", "0.1", "--out", p("strip")},
       p("strip")},
      {"embed", {"embed", "--data", p("data"), "--gens", p("data"), "--out", p("embed.csv")}, p("embed.csv")},
      {"gen-circle", {"gen-circle", "--n", "40", "--heldout", "20", "--seed", "2", "--out", p("circle")}, p("circle")},
      {"kernel", {"kernel", "--data", p("circle"), "--config", p("kernel.json"), "--out", p("kern")}, p("kern")},
      {"kernel-predict", {"kernel-predict", "--model", p("kern"), "--points", p("circle/heldout.csv"), "--out", p("pred.csv")},
       p("pred.csv")},
  };

  int stable = 0;
  std::string failed;
  for (const Step& s : steps) {
    if (s.name == "eval") {
      io::write_json(root / "batch.json", nlohmann::json::array({{{"seed", 0}, {"method", "convex+gradient"},
                                                                  {"est", p("cg")}, {"truth", p("data")},
                                                                  {"runtime_seconds", 0.0}}}));
    }
    if (s.name == "apply") io::write_csv(root / "image.csv", Matrix(io::read_csv(root / "data" / "base.csv").topRows(1)));
    std::vector<std::map<std::string, std::size_t>> runs;
    bool ok = true;
    for (int rep = 0; rep < 3; ++rep) {
      fs::remove_all(s.out);
      ok = ok && invoke(s.args) == cli::kExitOk;
      runs.push_back(csv_hashes(s.out));
    }
    ok = ok && !runs[0].empty() && runs[0] == runs[1] && runs[1] == runs[2];
    stable += ok;
    if (!ok) failed += " " + s.name;
  }
  fs::remove_all(root);
  return {stable == static_cast<int>(steps.size()),
          std::to_string(stable) + "/" + std::to_string(steps.size()) + " commands byte-identical over 3 runs" +
              (failed.empty() ? "" : ", unstable:" + failed)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact single-transform recovery", exact_recovery},
      {"convex+gradient recovery, unknown strengths", convex_gradient_recovery},
      {"translation error spread and median (8x8)", translation_spread},
      {"three transforms and disentangling ablation (8x8)", multi_transform_ablation},
      {"disentangling properties", disentangle_properties},
      {"closed-form error decreases with r", sample_size_trend},
      {"subsampled trace-norm estimator", tracenorm_estimator},
      {"solver monotonicity and gradients", solver_numerics},
      {"full convex vs sampled agreement", full_convex_agreement},
      {"kernel tangent field on the circle", kernel_circle},
      {"MST embedding rank correlation", mst_embedding},
      {"CLI reproducibility", reproducibility},
  };
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(static_cast<std::size_t>(std::stoul(argv[i])));
  if (selected.empty())
    for (std::size_t i = 1; i <= criteria.size(); ++i) selected.push_back(i);

  int failures = 0;
  for (std::size_t id : selected) {
    if (id < 1 || id > criteria.size()) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    const auto& [name, check] = criteria[id - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failures += !out.pass;
    std::cout << (out.pass ? "PASS" : "FAIL") << "  " << id << ". " << name << ": " << out.detail << " ["
              << fmt(seconds_since(t0)) << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
