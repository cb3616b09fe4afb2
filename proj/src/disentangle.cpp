#include "lietrans/disentangle.hpp"

#include "lietrans/error.hpp"
#include "lietrans/linalg.hpp"

#include <algorithm>

namespace lietrans {

DisentangledSet disentangle(const Matrix& t, const GeneratorSet& gens) {
  const Index n = t.rows();
  const auto K = static_cast<Index>(gens.K());
  const Index d = gens.dim();
  if (t.cols() != K) throw InvalidInput("disentangle: strengths must have one column per generator");
  if (n < 1) throw InvalidInput("disentangle: no strengths");
  if (K > std::min(n, d * d)) throw InvalidInput("disentangle: K exceeds min(n, d²)");

  DisentangledSet out;
  out.means = t.colwise().mean().transpose();
  const Matrix centered = t.rowwise() - out.means.transpose();

  Matrix m(K, d * d);
  for (Index k = 0; k < K; ++k) m.row(k) = vec(gens[static_cast<std::size_t>(k)]).transpose();

  // Z = T M; the SVD of R_T M gives that of Z without forming the n×d² matrix.
  Eigen::HouseholderQR<Matrix> qr(centered);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, K);
  const Matrix r = qr.matrixQR().topRows(K).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> svd(r * m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();

  Index keep = 0;
  while (keep < K && s(keep) > 1e-12 * s(0) && s(keep) > 0.0) ++keep;
  if (keep == 0) throw InvalidInput("disentangle: all transforms vanish after centering");
  if (keep < K) {
    out.warning = "stacked transform matrix has numerical rank " + std::to_string(keep) +
                  " < K = " + std::to_string(K) + "; returning " + std::to_string(keep) +
                  " transforms";
  }

  Matrix u = q * svd.matrixU().leftCols(keep);
  std::vector<Matrix> out_gens;
  for (Index k = 0; k < keep; ++k) {
    Matrix a = s(k) * mat(svd.matrixV().col(k));
    if (a.sum() < 0.0) {
      a = -a;
      u.col(k) = -u.col(k);
    }
    out_gens.push_back(std::move(a));
  }
  out.generators = GeneratorSet(std::move(out_gens));
  out.strengths = std::move(u);
  out.singular_values = s.head(keep);
  return out;
}

StrengthEstimate estimate_strengths(const PairSet& pairs, const GeneratorSet& gens) {
  if (gens.dim() != pairs.d()) throw InvalidInput("estimate_strengths: dimension mismatch");
  const Index n = pairs.n();
  const auto K = static_cast<Index>(gens.K());
  const Matrix diffs = pairs.differences();
  StrengthEstimate out;
  out.t = Matrix::Zero(n, K);
  Index dropped = 0;
  for (Index i = 0; i < n; ++i) {
    const Vector x = pairs.base().row(i).transpose();
    std::vector<Index> used;
    Matrix basis(pairs.d(), K);
    for (Index k = 0; k < K; ++k) {
      Vector col = gens[static_cast<std::size_t>(k)] * x;
      if (col.norm() > 1e-12) {
        basis.col(static_cast<Index>(used.size())) = col;
        used.push_back(k);
      } else {
        ++dropped;
      }
    }
    if (used.empty()) continue;
    const Vector c = pseudo_inverse(basis.leftCols(static_cast<Index>(used.size()))) * diffs.row(i).transpose();
    for (std::size_t u = 0; u < used.size(); ++u) out.t(i, used[u]) = c(static_cast<Index>(u));
  }
  if (dropped > 0) {
    out.warning = std::to_string(dropped) + " (point, generator) pairs had A_k x = 0; coordinates set to 0";
  }
  return out;
}

}  // namespace lietrans
