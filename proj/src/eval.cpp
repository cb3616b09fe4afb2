#include "lietrans/eval.hpp"

#include "lietrans/error.hpp"
#include "lietrans/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace lietrans {

double operator_norm(const Matrix& m) {
  if (!m.allFinite()) throw InvalidInput("operator_norm: non-finite matrix");
  if (m.size() == 0) return 0.0;
  if (std::max(m.rows(), m.cols()) <= 64) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  }
  const Matrix gram = m.transpose() * m;
  Vector v = Vector::Ones(gram.cols()) / std::sqrt(static_cast<double>(gram.cols()));
  double prev = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Vector w = gram * v;
    const double lambda = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (std::abs(lambda - prev) <= 1e-12 * std::abs(lambda)) break;
    prev = lambda;
  }
  return (m * v).norm();
}

GeneratorSet normalize_generators(const GeneratorSet& gens) {
  std::vector<Matrix> out;
  out.reserve(gens.K());
  for (const auto& a : gens.generators()) {
    const double s = operator_norm(a);
    out.push_back(s > 0.0 ? Matrix(a / s) : a);
  }
  return GeneratorSet(std::move(out), true);
}

MatchReport matched_error(const GeneratorSet& est, const GeneratorSet& truth) {
  if (est.dim() != truth.dim()) throw InvalidInput("matched_error: generator dimensions differ");
  const std::size_t ke = est.K();
  const std::size_t kt = truth.K();
  if (ke < kt) throw InvalidInput("matched_error: fewer estimates than ground-truth transforms");
  if (kt > 6) throw InvalidInput("matched_error: exhaustive matching supports at most 6 transforms");

  const GeneratorSet e = normalize_generators(est);
  const GeneratorSet g = normalize_generators(truth);
  std::vector<std::vector<double>> cost(kt, std::vector<double>(ke));
  std::vector<std::vector<int>> sign(kt, std::vector<int>(ke));
  for (std::size_t a = 0; a < kt; ++a) {
    for (std::size_t b = 0; b < ke; ++b) {
      const double plus = operator_norm(e[b] - g[a]);
      const double minus = operator_norm(e[b] + g[a]);
      cost[a][b] = std::min(plus, minus);
      sign[a][b] = minus < plus ? -1 : 1;
    }
  }

  // Enumerate injections via permutations of the estimate indices; the first
  // kt entries define the assignment.
  std::vector<std::size_t> perm(ke);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_perm;
  do {
    double total = 0.0;
    for (std::size_t a = 0; a < kt; ++a) total += cost[a][perm[a]];
    if (total < best) {
      best = total;
      best_perm.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(kt));
    }
    std::reverse(perm.begin() + static_cast<std::ptrdiff_t>(kt), perm.end());
  } while (std::next_permutation(perm.begin(), perm.end()));

  MatchReport report;
  report.total = 0.0;
  for (std::size_t a = 0; a < kt; ++a) {
    report.permutation.push_back(static_cast<Index>(best_perm[a]));
    report.signs.push_back(sign[a][best_perm[a]]);
    report.per_transform_error.push_back(cost[a][best_perm[a]]);
    report.total += cost[a][best_perm[a]];
  }
  return report;
}

nlohmann::json to_json(const MatchReport& report) {
  return {{"permutation", report.permutation},
          {"signs", report.signs},
          {"per_transform_error", report.per_transform_error},
          {"total", report.total}};
}

void write_batch_csv(const std::filesystem::path& path, const std::vector<BatchRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << "seed,method,total_error,runtime_seconds\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << r.method << ',' << io::format_double(r.total_error) << ','
        << io::format_double(r.runtime_seconds) << '\n';
  }
}

}  // namespace lietrans
