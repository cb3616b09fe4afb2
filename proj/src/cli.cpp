#include "lietrans/cli.hpp"

#include "lietrans/disentangle.hpp"
#include "lietrans/embedding.hpp"
#include "lietrans/error.hpp"
#include "lietrans/eval.hpp"
#include "lietrans/io.hpp"
#include "lietrans/kernel.hpp"
#include "lietrans/linalg.hpp"
#include "lietrans/neighbors.hpp"
#include "lietrans/pipeline.hpp"
#include "lietrans/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace lietrans::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string method = "convex+gradient";
  std::optional<Index> k;
  std::optional<double> lambda;
  Index root = 0;
  int steps = 3;
  double eta = 0.1;
  std::string data;
  std::string est;
  std::string truth;
  std::string gens;
  std::string image;
  std::string batch;
  std::string model;
  std::string points;
  Index n = 200;
  Index heldout = 200;
};

// Collects the record every command writes next to its outputs.
class Manifest {
 public:
  explicit Manifest(std::string command) : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["version"] = kVersion;
    doc_["inputs"] = json::object();
    doc_["outputs"] = json::array();
    doc_["config"] = json::object();
    doc_["seed"] = nullptr;
  }
  json& doc() { return doc_; }
  void input(const std::string& key, const fs::path& p) { doc_["inputs"][key] = p.string(); }
  void output(const fs::path& p) { doc_["outputs"].push_back(p.string()); }
  void write(const fs::path& path) {
    doc_["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    io::write_json(path, doc_);
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point start_;
};

fs::path require_out(const Options& o) {
  if (o.out.empty()) throw InvalidInput("--out is required");
  return fs::path(o.out);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create directory " + dir.string() + ": " + ec.message());
}

void save_csv(Manifest& m, const fs::path& p, const Matrix& data) {
  io::write_csv(p, data);
  m.output(p);
}

Matrix vector_column(const std::vector<double>& v) {
  Matrix m(static_cast<Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Index>(i), 0) = v[i];
  return m;
}

// ---- gen -------------------------------------------------------------------

void cmd_gen(const Options& o) {
  if (o.config.empty()) throw InvalidInput("gen: --config <spec.json> is required");
  const fs::path out = require_out(o);
  Manifest man("gen");
  man.input("spec", o.config);
  SyntheticSpec spec = io::spec_from_json(io::read_json(o.config));
  if (o.seed) spec.seed = *o.seed;
  spec.validate();
  man.doc()["config"] = io::spec_to_json(spec);
  man.doc()["seed"] = spec.seed;
  ensure_dir(out);

  const Dataset base = make_base_dataset(spec);
  const SyntheticPairs sp = generate_pairs(spec, base);
  save_csv(man, out / "base.csv", sp.pairs.base());
  save_csv(man, out / "neighbor.csv", sp.pairs.neighbor());
  save_csv(man, out / "strengths.csv", *sp.pairs.strengths());
  for (std::size_t k = 0; k < sp.truth.K(); ++k) {
    save_csv(man, out / ("truth_" + std::to_string(k + 1) + ".csv"), sp.truth[k]);
  }
  if (base.grid_side()) {
    // First base image next to its neighbor.
    const int side = *base.grid_side();
    const Matrix a = io::as_image(sp.pairs.base().row(0).transpose(), side);
    const Matrix b = io::as_image(sp.pairs.neighbor().row(0).transpose(), side);
    Matrix strip(side, 2 * side);
    strip << a, b;
    const fs::path p = out / "preview.pgm";
    io::write_pgm(p, io::to_gray(strip, strip.minCoeff(), strip.maxCoeff()));
    man.output(p);
  }
  man.write(out / "manifest.json");
}

// ---- learn -----------------------------------------------------------------

PairSet load_pairs(const fs::path& dir) {
  const Matrix base = io::read_csv(dir / "base.csv");
  if (fs::exists(dir / "neighbor.csv")) {
    return PairSet(base, io::read_csv(dir / "neighbor.csv"), Provenance::nearest_neighbor);
  }
  return nearest_neighbors(Dataset(base));
}

LearnOptions learn_options(const json& cfg, const Options& o) {
  LearnOptions opts;
  opts.method = method_from_string(o.method);
  const bool staged = cfg.contains("convex") || cfg.contains("gradient");
  const json empty = json::object();
  opts.convex = solver_config_from_json(staged ? cfg.value("convex", empty) : cfg);
  opts.gradient = solver_config_from_json(staged ? cfg.value("gradient", empty) : cfg);
  opts.K = cfg.value("K", Index{1});
  if (cfg.contains("lambdas")) opts.lambdas = cfg.at("lambdas").get<std::vector<double>>();
  if (cfg.contains("samples")) opts.samples = cfg.at("samples").get<Index>();
  opts.disentangle = cfg.value("disentangle", true);
  if (o.k) opts.K = *o.k;
  if (o.lambda) {
    opts.lambdas = {*o.lambda};
    opts.convex.lambda = *o.lambda;
  }
  if (o.seed) {
    for (SolverConfig* c : {&opts.convex, &opts.gradient}) {
      c->seed = *o.seed;
      c->svt.seed = *o.seed;
    }
  }
  opts.convex.K = opts.K;
  opts.gradient.K = opts.K;
  return opts;
}

void cmd_learn(const Options& o) {
  if (o.data.empty()) throw InvalidInput("learn: --data <dir> is required");
  const fs::path out = require_out(o);
  Manifest man("learn");
  man.input("data", o.data);
  json cfg = json::object();
  if (!o.config.empty()) {
    man.input("config", o.config);
    cfg = io::read_json(o.config);
  }
  const PairSet pairs = load_pairs(o.data);
  const LearnOptions opts = learn_options(cfg, o);
  man.doc()["config"] = {{"method", to_string(opts.method)},
                         {"K", opts.K},
                         {"convex", to_json(opts.convex)},
                         {"gradient", to_json(opts.gradient)},
                         {"lambdas", opts.lambdas},
                         {"disentangle", opts.disentangle}};
  man.doc()["seed"] = opts.convex.seed;
  ensure_dir(out);

  const LearnResult res = learn(pairs, opts);
  io::write_generators(out, res.generators, "gen");
  for (std::size_t k = 0; k < res.generators.K(); ++k) man.output(out / ("gen_" + std::to_string(k + 1) + ".csv"));
  save_csv(man, out / "strengths.csv", res.strengths);
  save_csv(man, out / "objective.csv", vector_column(res.objective_trace));
  if (res.alpha) save_csv(man, out / "alpha.csv", res.alpha->dense_alpha());
  man.doc()["restart_objectives"] = res.restart_objectives;
  man.doc()["chosen_lambda"] = res.chosen_lambda;
  man.doc()["lambda_fits"] = res.lambda_fits;
  if (!res.warning.empty()) {
    man.doc()["warning"] = res.warning;
    std::cerr << "warning: " << res.warning << '\n';
  }
  man.write(out / "manifest.json");
}

// ---- eval ------------------------------------------------------------------

void cmd_eval(const Options& o) {
  const fs::path out = require_out(o);
  Manifest man("eval");
  if (!o.batch.empty()) {
    man.input("batch", o.batch);
    const json batch = io::read_json(o.batch);
    if (!batch.is_array()) throw InvalidInput("eval: batch file must be a JSON array");
    std::vector<BatchRow> rows;
    for (const auto& entry : batch) {
      BatchRow row;
      row.seed = entry.at("seed").get<std::uint64_t>();
      row.method = entry.value("method", std::string("unknown"));
      const fs::path est = entry.at("est").get<std::string>();
      const fs::path truth = entry.at("truth").get<std::string>();
      row.total_error = matched_error(io::read_generators(est), io::read_generators(truth)).total;
      if (entry.contains("runtime_seconds")) {
        row.runtime_seconds = entry.at("runtime_seconds").get<double>();
      } else if (fs::exists(est / "manifest.json")) {
        row.runtime_seconds = io::read_json(est / "manifest.json").value("seconds", 0.0);
      }
      rows.push_back(std::move(row));
    }
    if (out.has_parent_path()) ensure_dir(out.parent_path());
    write_batch_csv(out, rows);
    man.output(out);
    man.write(fs::path(out).replace_extension(".manifest.json"));
    return;
  }
  if (o.est.empty() || o.truth.empty()) throw InvalidInput("eval: --est and --truth are required");
  man.input("est", o.est);
  man.input("truth", o.truth);
  const MatchReport report = matched_error(io::read_generators(o.est), io::read_generators(o.truth));
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  io::write_json(out, to_json(report));
  man.output(out);
  man.write(fs::path(out).replace_extension(".manifest.json"));
}

// ---- apply -----------------------------------------------------------------

Vector load_image(const fs::path& p) {
  if (p.extension() == ".pgm") {
    const Matrix img = io::read_pgm(p);
    Vector v(img.size());
    for (Index r = 0; r < img.rows(); ++r)
      for (Index c = 0; c < img.cols(); ++c) v(r * img.cols() + c) = img(r, c);
    return v;
  }
  const Matrix m = io::read_csv(p);
  if (m.rows() == 1) return m.row(0).transpose();
  if (m.cols() == 1) return m.col(0);
  throw InvalidInput("apply: image CSV must be a single row or column");
}

void cmd_apply(const Options& o) {
  if (o.gens.empty() || o.image.empty()) throw InvalidInput("apply: --gens and --image are required");
  if (o.steps < 0) throw InvalidInput("apply: --steps must be >= 0");
  const fs::path out = require_out(o);
  Manifest man("apply");
  man.input("gens", o.gens);
  man.input("image", o.image);
  man.doc()["config"] = {{"steps", o.steps}, {"eta", o.eta}};
  const GeneratorSet gens = io::read_generators(o.gens);
  const Vector x = load_image(o.image);
  if (x.size() != gens.dim()) {
    throw InvalidInput("apply: image has " + std::to_string(x.size()) + " values but generators are " +
                       std::to_string(gens.dim()) + "×" + std::to_string(gens.dim()));
  }
  ensure_dir(out);
  const auto side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(x.size()))));
  const bool square = static_cast<Index>(side) * side == x.size();
  const double lo = x.minCoeff();
  const double hi = x.maxCoeff();
  for (std::size_t k = 0; k < gens.K(); ++k) {
    Matrix strip(2 * o.steps + 1, x.size());
    for (int j = -o.steps; j <= o.steps; ++j) {
      strip.row(j + o.steps) = (matrix_exp(gens[k], j * o.eta) * x).transpose();
    }
    const std::string stem = "strip_" + std::to_string(k + 1);
    save_csv(man, out / (stem + ".csv"), strip);
    if (square) {
      Matrix canvas(side, side * strip.rows());
      for (Index j = 0; j < strip.rows(); ++j) {
        canvas.middleCols(j * side, side) = io::as_image(strip.row(j).transpose(), side);
      }
      const fs::path p = out / (stem + ".pgm");
      io::write_pgm(p, io::to_gray(canvas, lo, hi > lo ? hi : lo + 1.0));
      man.output(p);
    }
  }
  man.write(out / "manifest.json");
}

// ---- embed -----------------------------------------------------------------

void cmd_embed(const Options& o) {
  if (o.data.empty() || o.gens.empty()) throw InvalidInput("embed: --data and --gens are required");
  const fs::path out = require_out(o);
  Manifest man("embed");
  man.input("data", o.data);
  man.input("gens", o.gens);
  man.doc()["config"] = {{"root", o.root}};
  const fs::path data = fs::is_directory(o.data) ? fs::path(o.data) / "base.csv" : fs::path(o.data);
  const Dataset ds(io::read_csv(data));
  const GeneratorSet gens = io::read_generators(o.gens);
  const TreeEmbedding emb = embed(ds, gens, o.root);
  std::vector<std::string> header;
  for (std::size_t k = 0; k < gens.K(); ++k) header.push_back("k" + std::to_string(k + 1));
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  io::write_csv(out, emb.coords, header);
  man.output(out);
  man.write(fs::path(out).replace_extension(".manifest.json"));
}

// ---- kernel ----------------------------------------------------------------

void cmd_gen_circle(const Options& o) {
  const fs::path out = require_out(o);
  if (o.n < 2 || o.heldout < 1) throw InvalidInput("gen-circle: need --n >= 2 and --heldout >= 1");
  Manifest man("gen-circle");
  const std::uint64_t seed = o.seed.value_or(0);
  man.doc()["seed"] = seed;
  man.doc()["config"] = {{"n", o.n}, {"heldout", o.heldout}};
  ensure_dir(out);
  const CircleSample train = sample_circle(o.n, seed, 0);
  const CircleSample test = sample_circle(o.heldout, seed, 1);
  save_csv(man, out / "base.csv", train.points);
  save_csv(man, out / "tangents.csv", train.tangents);
  save_csv(man, out / "heldout.csv", test.points);
  save_csv(man, out / "heldout_tangents.csv", test.tangents);
  man.write(out / "manifest.json");
}

void cmd_kernel(const Options& o) {
  if (o.data.empty()) throw InvalidInput("kernel: --data <dir> is required");
  const fs::path out = require_out(o);
  Manifest man("kernel");
  man.input("data", o.data);
  json cfg = json::object();
  if (!o.config.empty()) {
    man.input("config", o.config);
    cfg = io::read_json(o.config);
  }
  KernelOptions kopts;
  kopts.K = o.k.value_or(cfg.value("K", Index{1}));
  kopts.lambda1 = o.lambda.value_or(cfg.value("lambda1", kopts.lambda1));
  if (cfg.contains("lambda2")) kopts.lambda2 = cfg.at("lambda2").get<double>();
  if (cfg.contains("sigma")) kopts.sigma = cfg.at("sigma").get<double>();
  json solver_json = cfg.value("solver", json::object());
  SolverConfig scfg = solver_config_from_json(solver_json);
  if (o.seed) {
    scfg.seed = *o.seed;
    scfg.svt.seed = *o.seed;
  }
  const fs::path data(o.data);
  const Dataset ds(io::read_csv(data / "base.csv"));
  const PairSet pairs = k_distinct_neighbors(ds, kopts.K);
  const KernelModel model = fit_kernel(pairs, kopts, scfg);

  ensure_dir(out);
  save_csv(man, out / "train_points.csv", model.train_points);
  save_csv(man, out / "diffs.csv", model.diffs);
  save_csv(man, out / "alpha.csv", model.alpha);
  save_csv(man, out / "weights.csv", model.weights);
  Matrix index(static_cast<Index>(model.pair_point.size()), 1);
  for (std::size_t j = 0; j < model.pair_point.size(); ++j) index(static_cast<Index>(j), 0) = static_cast<double>(model.pair_point[j]);
  save_csv(man, out / "pair_point.csv", index);
  save_csv(man, out / "objective.csv", vector_column(model.objective_trace));
  const json model_doc = {{"K", model.K}, {"sigma", model.sigma}, {"lambda1", model.lambda1}, {"lambda2", model.lambda2}};
  io::write_json(out / "model.json", model_doc);
  man.output(out / "model.json");
  man.doc()["config"] = {{"model", model_doc}, {"solver", to_json(scfg)}};
  man.doc()["seed"] = scfg.seed;

  if (fs::exists(data / "heldout.csv") && fs::exists(data / "heldout_tangents.csv")) {
    const Matrix held = io::read_csv(data / "heldout.csv");
    const Matrix tang = io::read_csv(data / "heldout_tangents.csv");
    const Matrix pred = predict_fields(model, held);
    const FieldScore score = score_field(pred.leftCols(held.cols()), tang);
    man.doc()["heldout_cosine"] = score.mean_cosine;
    man.doc()["heldout_error"] = score.mean_error;
  }
  man.write(out / "manifest.json");
}

KernelModel load_kernel_model(const fs::path& dir) {
  const json doc = io::read_json(dir / "model.json");
  KernelModel model;
  try {
    model.K = doc.at("K").get<Index>();
    model.sigma = doc.at("sigma").get<double>();
    model.lambda1 = doc.at("lambda1").get<double>();
    model.lambda2 = doc.at("lambda2").get<double>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("kernel model: ") + e.what());
  }
  model.train_points = io::read_csv(dir / "train_points.csv");
  model.diffs = io::read_csv(dir / "diffs.csv");
  model.weights = io::read_csv(dir / "weights.csv");
  const Matrix index = io::read_csv(dir / "pair_point.csv");
  if (index.rows() != model.diffs.rows() || model.weights.rows() != model.diffs.rows() ||
      model.weights.cols() != model.K) {
    throw InvalidInput("kernel model: inconsistent files in " + dir.string());
  }
  for (Index j = 0; j < index.rows(); ++j) {
    const auto u = static_cast<Index>(index(j, 0));
    if (u < 0 || u >= model.train_points.rows()) throw InvalidInput("kernel model: bad pair index");
    model.pair_point.push_back(u);
  }
  model.factor = kernel_factor(model.train_points, model.lambda2, model.sigma);
  return model;
}

void cmd_kernel_predict(const Options& o) {
  if (o.model.empty() || o.points.empty()) throw InvalidInput("kernel-predict: --model and --points are required");
  const fs::path out = require_out(o);
  Manifest man("kernel-predict");
  man.input("model", o.model);
  man.input("points", o.points);
  const KernelModel model = load_kernel_model(o.model);
  const Matrix pred = predict_fields(model, io::read_csv(o.points));
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  io::write_csv(out, pred);
  man.output(out);
  man.write(fs::path(out).replace_extension(".manifest.json"));
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Learn matrix Lie group transformations from point clouds"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output file or directory");
    sub->add_option("--seed", o.seed, "Random seed");
  };

  auto* gen = app.add_subcommand("gen", "Synthesize pairs with ground-truth generators");
  add_common(gen);
  gen->add_option("--config", o.config, "Synthetic spec JSON")->required();

  auto* learn_cmd = app.add_subcommand("learn", "Learn generators from pairs");
  add_common(learn_cmd);
  learn_cmd->add_option("--data", o.data, "Directory with base.csv [neighbor.csv]")->required();
  learn_cmd->add_option("--config", o.config, "Solver config JSON");
  learn_cmd->add_option("--method", o.method, "convex | convex+gradient | nonconvex");
  learn_cmd->add_option("--k", o.k, "Number of transforms");
  learn_cmd->add_option("--lambda", o.lambda, "Trace-norm weight (disables the sweep)");

  auto* eval = app.add_subcommand("eval", "Matched operator-norm error against ground truth");
  add_common(eval);
  eval->add_option("--est", o.est, "Directory with estimated generators");
  eval->add_option("--truth", o.truth, "Directory with ground-truth generators");
  eval->add_option("--batch", o.batch, "JSON list of {seed, method, est, truth}");

  auto* apply = app.add_subcommand("apply", "Render exp(j·eta·A_k)x for j = -steps..steps");
  add_common(apply);
  apply->add_option("--gens", o.gens, "Generator directory")->required();
  apply->add_option("--image", o.image, "Image as CSV row or PGM")->required();
  apply->add_option("--steps", o.steps, "Steps on each side");
  apply->add_option("--eta", o.eta, "Step length");

  auto* emb = app.add_subcommand("embed", "MST embedding coordinates");
  add_common(emb);
  emb->add_option("--data", o.data, "Directory with base.csv, or a CSV file")->required();
  emb->add_option("--gens", o.gens, "Generator directory")->required();
  emb->add_option("--root", o.root, "Root point index");

  auto* circle = app.add_subcommand("gen-circle", "Sample the unit-circle benchmark");
  add_common(circle);
  circle->add_option("--n", o.n, "Training points");
  circle->add_option("--heldout", o.heldout, "Held-out points");

  auto* kern = app.add_subcommand("kernel", "Fit the kernel vector-field model");
  add_common(kern);
  kern->add_option("--data", o.data, "Directory with base.csv")->required();
  kern->add_option("--config", o.config, "Kernel config JSON");
  kern->add_option("--k", o.k, "Number of fields");
  kern->add_option("--lambda", o.lambda, "Trace-norm weight lambda1");

  auto* kpred = app.add_subcommand("kernel-predict", "Evaluate fitted fields at points");
  add_common(kpred);
  kpred->add_option("--model", o.model, "Model directory")->required();
  kpred->add_option("--points", o.points, "Points CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*gen) cmd_gen(o);
    else if (*learn_cmd) cmd_learn(o);
    else if (*eval) cmd_eval(o);
    else if (*apply) cmd_apply(o);
    else if (*emb) cmd_embed(o);
    else if (*circle) cmd_gen_circle(o);
    else if (*kern) cmd_kernel(o);
    else if (*kpred) cmd_kernel_predict(o);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace lietrans::cli
