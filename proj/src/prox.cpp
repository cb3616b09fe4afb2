#include "lietrans/error.hpp"
#include "lietrans/linalg.hpp"
#include "lietrans/solver.hpp"
#include "prox_internal.hpp"

#include <algorithm>
#include <cmath>

namespace lietrans {

namespace {

struct ThinSvd {
  Matrix u;
  Vector s;
  Matrix v;
};

ThinSvd exact_svd(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Matrix orthonormal_basis(const Matrix& y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(y.rows(), y.cols());
}

// Gaussian range finder with power iterations.
ThinSvd randomized_svd(const Matrix& m, Index sketch, int power_iters, std::uint64_t seed) {
  auto rng = make_rng(seed, 0x5eed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix omega(m.cols(), sketch);
  for (Index j = 0; j < sketch; ++j)
    for (Index i = 0; i < m.cols(); ++i) omega(i, j) = normal(rng);
  Matrix q = orthonormal_basis(m * omega);
  for (int it = 0; it < power_iters; ++it) {
    q = orthonormal_basis(m.transpose() * q);
    q = orthonormal_basis(m * q);
  }
  Matrix b = q.transpose() * m;
  ThinSvd small = exact_svd(b);
  return {q * small.u, small.s, small.v};
}

}  // namespace

namespace detail {

Matrix prox_trace_norm(const Matrix& m, double tau, const SvtMode& mode, Index rank_hint,
                       double& out_norm) {
  if (!(tau >= 0.0)) throw InvalidInput("prox_trace_norm: tau must be >= 0");
  out_norm = 0.0;
  if (m.size() == 0) return m;
  const Index small_dim = std::min(m.rows(), m.cols());
  const Index sketch = std::max<Index>(rank_hint, 1) + mode.oversample;
  bool randomized = mode.kind == SvtMode::Kind::randomized ||
                    (mode.kind == SvtMode::Kind::automatic && small_dim > 500);
  if (sketch >= small_dim) randomized = false;
  if (tau == 0.0 && !randomized) {
    out_norm = trace_norm(m);
    return m;
  }

  ThinSvd svd = randomized ? randomized_svd(m, sketch, mode.power_iters, mode.seed) : exact_svd(m);
  Vector shrunk = (svd.s.array() - tau).cwiseMax(0.0);
  Index keep = 0;
  while (keep < shrunk.size() && shrunk(keep) > 0.0) ++keep;
  if (keep == 0) return Matrix::Zero(m.rows(), m.cols());
  out_norm = shrunk.head(keep).sum();
  return svd.u.leftCols(keep) * shrunk.head(keep).asDiagonal() * svd.v.leftCols(keep).transpose();
}

}  // namespace detail

Matrix prox_trace_norm(const Matrix& m, double tau, const SvtMode& mode, Index rank_hint) {
  if (tau == 0.0) {
    if (!(tau >= 0.0)) throw InvalidInput("prox_trace_norm: tau must be >= 0");
    return m;
  }
  double norm = 0.0;
  return detail::prox_trace_norm(m, tau, mode, rank_hint, norm);
}

double subsampled_trace_norm(const Matrix& x, std::span<const Index> rows) {
  if (rows.empty()) throw InvalidInput("subsampled_trace_norm: need at least one row");
  Matrix y(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= x.rows()) throw InvalidInput("subsampled_trace_norm: row out of range");
    y.row(static_cast<Index>(i)) = x.row(rows[i]);
  }
  return trace_norm(y) / std::sqrt(static_cast<double>(rows.size()));
}

double subsampled_trace_norm(const Matrix& x, Index rows, std::uint64_t seed) {
  if (rows < 1 || rows > x.rows()) throw InvalidInput("subsampled_trace_norm: need 1 <= L <= n");
  auto rng = make_rng(seed, 0x7ace);
  std::uniform_int_distribution<Index> pick(0, x.rows() - 1);
  std::vector<Index> idx(static_cast<std::size_t>(rows));
  for (auto& i : idx) i = pick(rng);
  return subsampled_trace_norm(x, idx);
}

}  // namespace lietrans
