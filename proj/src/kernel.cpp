#include "lietrans/kernel.hpp"

#include "lietrans/error.hpp"
#include "lietrans/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace lietrans {

double laplacian_kernel(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                        double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("laplacian_kernel: sigma must be > 0");
  return std::exp(-(x - y).norm() / sigma);
}

Matrix laplacian_kernel_matrix(const Matrix& a, const Matrix& b, double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("laplacian_kernel: sigma must be > 0");
  Matrix k(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.rows(); ++j) k(i, j) = std::exp(-(a.row(i) - b.row(j)).norm() / sigma);
  return k;
}

Eigen::LLT<Matrix> kernel_factor(const Matrix& points, double lambda2, double sigma) {
  Matrix gram = laplacian_kernel_matrix(points, points, sigma);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  const double lo = ev.minCoeff() + lambda2;
  const double hi = ev.maxCoeff() + lambda2;
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw ConditioningError("kernel matrix with ridge is ill-conditioned (condition " +
                            std::to_string(lo > 0.0 ? hi / lo : INFINITY) +
                            "); increase lambda2");
  }
  gram.diagonal().array() += lambda2;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw ConditioningError("kernel matrix is not positive definite; increase lambda2");
  return llt;
}

Matrix smoothed_basis(const Matrix& points, double lambda2, double sigma, const Matrix& queries) {
  if (!(lambda2 >= 0.0)) throw InvalidInput("smoothed_basis: lambda2 must be >= 0");
  return kernel_factor(points, lambda2, sigma).solve(laplacian_kernel_matrix(points, queries, sigma));
}

double median_pairwise_distance(const Matrix& points) {
  std::vector<double> d;
  const Index n = points.rows();
  if (n < 2) throw InvalidInput("median_pairwise_distance: need at least two points");
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) d.push_back((points.row(i) - points.row(j)).norm());
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  if (d.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(d.begin(), mid);
  return 0.5 * (lower + upper);
}

KernelModel fit_kernel(const PairSet& pairs, const KernelOptions& opts, const SolverConfig& cfg) {
  if (opts.K < 1) throw InvalidInput("fit_kernel: K must be >= 1");
  if (!(opts.lambda1 >= 0.0)) throw InvalidInput("fit_kernel: lambda1 must be >= 0");
  const Index n = pairs.n();
  if (opts.K > n) throw InvalidInput("fit_kernel: K exceeds the number of pairs");

  KernelModel model;
  model.K = opts.K;
  model.lambda1 = opts.lambda1;

  // Deduplicate base rows; copies share one smoothed basis function.
  std::map<std::vector<double>, Index> seen;
  std::vector<Index> unique_rows;
  model.pair_point.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    std::vector<double> key(static_cast<std::size_t>(pairs.d()));
    for (Index c = 0; c < pairs.d(); ++c) key[static_cast<std::size_t>(c)] = pairs.base()(i, c);
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<Index>(unique_rows.size()));
    if (inserted) unique_rows.push_back(i);
    model.pair_point[static_cast<std::size_t>(i)] = it->second;
  }
  const auto r = static_cast<Index>(unique_rows.size());
  model.train_points.resize(r, pairs.d());
  for (Index u = 0; u < r; ++u) model.train_points.row(u) = pairs.base().row(unique_rows[u]);

  if (opts.sigma) {
    model.sigma = *opts.sigma;
  } else {
    if (r < 2) throw InvalidInput("fit_kernel: need two distinct points for the default bandwidth");
    model.sigma = median_pairwise_distance(model.train_points);
  }
  if (!(model.sigma > 0.0)) throw InvalidInput("fit_kernel: sigma must be > 0");
  model.lambda2 = opts.lambda2 ? *opts.lambda2 : 1e-3 * static_cast<double>(r);
  if (!(model.lambda2 > 0.0)) throw InvalidInput("fit_kernel: lambda2 must be > 0");

  model.factor = kernel_factor(model.train_points, model.lambda2, model.sigma);
  // h(u, v) = h_u(p_v) on the unique points.
  const Matrix h = model.factor.solve(laplacian_kernel_matrix(model.train_points, model.train_points, model.sigma));

  model.diffs = pairs.differences();
  Matrix coupling(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      coupling(i, j) = h(model.pair_point[static_cast<std::size_t>(j)], model.pair_point[static_cast<std::size_t>(i)]);

  SolverConfig run = cfg;
  run.lambda = opts.lambda1;
  run.K = opts.K;
  AtomProblem problem{std::move(coupling), model.diffs, model.diffs};
  AtomFit fit = fit_atom_weights(problem, run);
  model.alpha = std::move(fit.alpha);
  model.objective_trace = std::move(fit.objective_trace);

  Eigen::BDCSVD<Matrix> svd(model.alpha, Eigen::ComputeThinU | Eigen::ComputeThinV);
  model.weights = svd.matrixV().leftCols(opts.K) * svd.singularValues().head(opts.K).asDiagonal();
  // Rank-K data fit, for λ₁ selection.
  const Matrix truncated = svd.matrixU().leftCols(opts.K) * model.weights.transpose();
  model.data_fit = atom_data_fit(problem, truncated, run);
  return model;
}

Matrix predict_fields(const KernelModel& model, const Matrix& points) {
  if (points.cols() != model.train_points.cols()) throw InvalidInput("predict_field: dimension mismatch");
  const Index d = points.cols();
  const Matrix h = model.factor.solve(laplacian_kernel_matrix(model.train_points, points, model.sigma));
  const auto n = static_cast<Index>(model.pair_point.size());
  Matrix out(points.rows(), model.K * d);
  for (Index q = 0; q < points.rows(); ++q) {
    for (Index k = 0; k < model.K; ++k) {
      Vector f = Vector::Zero(d);
      for (Index j = 0; j < n; ++j) {
        f += model.weights(j, k) * h(model.pair_point[static_cast<std::size_t>(j)], q) * model.diffs.row(j).transpose();
      }
      out.row(q).segment(k * d, d) = f.transpose();
    }
  }
  return out;
}

Matrix predict_field(const KernelModel& model, const Eigen::Ref<const Vector>& point) {
  const Matrix row = predict_fields(model, Matrix(point.transpose()));
  const Index d = point.size();
  Matrix out(model.K, d);
  for (Index k = 0; k < model.K; ++k) out.row(k) = row.row(0).segment(k * d, d);
  return out;
}

CircleSample sample_circle(Index n, std::uint64_t seed, std::uint64_t stream) {
  auto rng = make_rng(seed, stream);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  CircleSample s{Matrix(n, 2), Matrix(n, 2)};
  for (Index i = 0; i < n; ++i) {
    const double a = angle(rng);
    s.points.row(i) << std::cos(a), std::sin(a);
    s.tangents.row(i) << -std::sin(a), std::cos(a);
  }
  return s;
}

FieldScore score_field(const Matrix& predicted, const Matrix& tangents) {
  if (predicted.rows() != tangents.rows() || predicted.cols() != tangents.cols()) {
    throw InvalidInput("score_field: shape mismatch");
  }
  const Index m = predicted.rows();
  double cos_sum = 0.0;
  Matrix unit(m, predicted.cols());
  for (Index i = 0; i < m; ++i) {
    const double pn = predicted.row(i).norm();
    if (pn > 0.0) unit.row(i) = predicted.row(i) / pn;
    else unit.row(i).setZero();
    const double tn = tangents.row(i).norm();
    if (pn > 0.0 && tn > 0.0) cos_sum += predicted.row(i).dot(tangents.row(i)) / (pn * tn);
  }
  FieldScore score;
  score.mean_cosine = std::abs(cos_sum) / static_cast<double>(m);
  const double sign = cos_sum < 0.0 ? -1.0 : 1.0;
  double err = 0.0;
  for (Index i = 0; i < m; ++i) err += (sign * unit.row(i) - tangents.row(i)).norm();
  score.mean_error = err / static_cast<double>(m);
  return score;
}

}  // namespace lietrans
