#include "lietrans/linalg.hpp"

#include "lietrans/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <thread>

namespace lietrans {

namespace {

double one_norm(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

Matrix matrix_exp(const Matrix& a, double t) {
  if (a.rows() != a.cols()) throw InvalidInput("matrix_exp: matrix must be square");
  if (!a.allFinite() || !std::isfinite(t)) throw InvalidInput("matrix_exp: non-finite input");
  const Index d = a.rows();
  Matrix scaled = t * a;
  if (d == 0) return scaled;

  // Scale so the 1-norm is at most 1/2, where the Taylor tail is tiny.
  int squarings = 0;
  const double norm = one_norm(scaled);
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    scaled /= std::ldexp(1.0, squarings);
  }

  Matrix result = Matrix::Identity(d, d);
  Matrix term = Matrix::Identity(d, d);
  for (int k = 1; k < 64; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (one_norm(term) < 1e-16 * std::max(1.0, one_norm(result))) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

double default_whiten_ridge(const Dataset& ds) {
  const Matrix& x = ds.points();
  const double trace = x.squaredNorm() / static_cast<double>(x.rows());
  return 1e-8 * trace / static_cast<double>(x.cols());
}

Whitened whiten(const Dataset& ds, double ridge) {
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw InvalidInput("whiten: ridge must be >= 0");
  const Matrix& x = ds.points();
  const Index d = x.cols();
  Matrix sigma = x.transpose() * x / static_cast<double>(x.rows());
  sigma.diagonal().array() += ridge;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  const Vector& lam = eig.eigenvalues();
  const double lam_max = std::max(lam.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const double tol = lam_max * static_cast<double>(d) * std::numeric_limits<double>::epsilon();
  int null_dirs = 0;
  for (Index i = 0; i < d; ++i) {
    if (lam(i) <= tol) ++null_dirs;
  }
  if (null_dirs > 0) {
    throw RankDeficiency("whiten: second-moment matrix plus ridge is singular with " +
                             std::to_string(null_dirs) + " null direction(s)",
                         null_dirs);
  }

  const Matrix& v = eig.eigenvectors();
  WhitenTransform tr;
  tr.forward = v * lam.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  tr.inverse = v * lam.cwiseSqrt().asDiagonal() * v.transpose();
  tr.ridge = ridge;
  return {Dataset(x * tr.forward, ds.grid_side()), std::move(tr)};
}

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Matrix pseudo_inverse(const Matrix& m, double rel_cutoff) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  Vector inv = Vector::Zero(s.size());
  const double cutoff = s.size() > 0 ? rel_cutoff * s(0) : 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Vector vec(const Matrix& a) {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor r = a;
  return Eigen::Map<const Vector>(r.data(), r.size());
}

Matrix mat(const Eigen::Ref<const Vector>& v) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw InvalidInput("mat: length is not a perfect square");
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Vector copy = v;
  return Eigen::Map<const RowMajor>(copy.data(), d, d);
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

unsigned worker_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LIETRANS_THREADS")) {
    unsigned cap = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
    if (ec == std::errc() && cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

}  // namespace lietrans
