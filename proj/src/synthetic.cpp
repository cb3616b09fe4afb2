#include "lietrans/synthetic.hpp"

#include "lietrans/error.hpp"
#include "lietrans/linalg.hpp"

#include <array>
#include <cmath>

namespace lietrans {

namespace {

double keys_kernel(double u) {
  constexpr double a = -0.5;
  u = std::abs(u);
  if (u <= 1.0) return ((a + 2.0) * u - (a + 3.0)) * u * u + 1.0;
  if (u < 2.0) return ((a * u - 5.0 * a) * u + 8.0 * a) * u - 4.0 * a;
  return 0.0;
}

Matrix blurred_noise(int side, std::mt19937_64& rng) {
  constexpr int radius = 3;
  constexpr double sigma = 1.0;
  std::array<double, 2 * radius + 1> w{};
  double wsum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    w[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    wsum += w[i + radius];
  }
  double w2 = 0.0;
  for (auto& v : w) {
    v /= wsum;
    w2 += v * v;
  }
  // Separable blur of a padded canvas; each output pixel has variance w2².
  const int big = side + 2 * radius;
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix noise(big, big);
  for (Index r = 0; r < big; ++r)
    for (Index c = 0; c < big; ++c) noise(r, c) = normal(rng);
  Matrix rows = Matrix::Zero(big, side);
  for (int r = 0; r < big; ++r)
    for (int c = 0; c < side; ++c)
      for (int k = -radius; k <= radius; ++k) rows(r, c) += w[k + radius] * noise(r, c + radius + k);
  Matrix img = Matrix::Zero(side, side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c)
      for (int k = -radius; k <= radius; ++k) img(r, c) += w[k + radius] * rows(r + radius + k, c);
  return img / w2;
}

}  // namespace

Matrix rotation_generator_2d() {
  Matrix a(2, 2);
  a << 0.0, -1.0, 1.0, 0.0;
  return a;
}

Matrix image_translation_generator(int side, Axis axis) {
  if (side < 2) throw InvalidInput("image_translation_generator: side must be >= 2");
  const Index d = Index(side) * side;
  Matrix a = -Matrix::Identity(d, d);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const Index src = Index(r) * side + c;
      if (axis == Axis::horizontal && c + 1 < side) a(src + 1, src) += 1.0;
      if (axis == Axis::vertical && r + 1 < side) a(src + side, src) += 1.0;
    }
  }
  return a;
}

Matrix image_rotation_matrix(int side, double theta) {
  if (side < 3) throw InvalidInput("image_rotation_matrix: side must be >= 3");
  const Index d = Index(side) * side;
  const double center = 0.5 * (side - 1);
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  Matrix m = Matrix::Zero(d, d);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      // Inverse map: the source of output pixel (r, c) is rotated by −θ.
      const double x = c - center;
      const double y = r - center;
      const double xs = cs * x + sn * y + center;
      const double ys = -sn * x + cs * y + center;
      const int x0 = static_cast<int>(std::floor(xs));
      const int y0 = static_cast<int>(std::floor(ys));
      const Index dst = Index(r) * side + c;
      for (int yy = y0 - 1; yy <= y0 + 2; ++yy) {
        if (yy < 0 || yy >= side) continue;
        const double wy = keys_kernel(ys - yy);
        if (wy == 0.0) continue;
        for (int xx = x0 - 1; xx <= x0 + 2; ++xx) {
          if (xx < 0 || xx >= side) continue;
          const double wx = keys_kernel(xs - xx);
          if (wx == 0.0) continue;
          m(dst, Index(yy) * side + xx) += wy * wx;
        }
      }
    }
  }
  return m;
}

Matrix image_rotation_generator(int side, double epsilon) {
  if (side < 3) throw InvalidInput("image_rotation_generator: side must be >= 3");
  return (image_rotation_matrix(side, epsilon) - image_rotation_matrix(side, -epsilon)) /
         (2.0 * epsilon);
}

Matrix make_generator(const TransformSpec& kind, int side) {
  switch (kind.kind) {
    case TransformKind::rotation2d: return rotation_generator_2d();
    case TransformKind::image_rotation: return image_rotation_generator(side);
    case TransformKind::translate_h: return image_translation_generator(side, Axis::horizontal);
    case TransformKind::translate_v: return image_translation_generator(side, Axis::vertical);
    case TransformKind::custom: return kind.custom;
  }
  throw InvalidInput("unknown transform kind");
}

GeneratorSet make_generators(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<Matrix> gens;
  for (const auto& k : spec.kind) gens.push_back(make_generator(k, spec.side));
  return GeneratorSet(std::move(gens));
}

namespace {

bool is_grid_kind(TransformKind k) {
  return k == TransformKind::image_rotation || k == TransformKind::translate_h ||
         k == TransformKind::translate_v;
}

}  // namespace

Dataset make_base_dataset(const SyntheticSpec& spec) {
  spec.validate();
  const Index d = spec.dimension();
  auto rng = make_rng(spec.seed, 0);
  Matrix x(spec.n, d);
  if (is_grid_kind(spec.kind.front().kind)) {
    for (Index i = 0; i < spec.n; ++i) {
      Matrix img = blurred_noise(spec.side, rng);
      for (int r = 0; r < spec.side; ++r)
        for (int c = 0; c < spec.side; ++c) x(i, Index(r) * spec.side + c) = img(r, c);
    }
    return Dataset(std::move(x), spec.side);
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < d; ++j) x(i, j) = normal(rng);
  return Dataset(std::move(x));
}

Matrix draw_strengths(Index n, Index K, double low, double high, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(low, high);
  std::bernoulli_distribution coin(0.5);
  Matrix t(n, K);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < K; ++k) {
      const double m = low == high ? low : mag(rng);
      t(i, k) = coin(rng) ? m : -m;
    }
  }
  return t;
}

Matrix apply_strengths(const Matrix& base, const GeneratorSet& gens, const Matrix& strengths,
                       Exactness exactness) {
  const Index n = base.rows();
  const Index d = base.cols();
  const auto K = static_cast<Index>(gens.K());
  if (gens.dim() != d) throw InvalidInput("apply_strengths: generator dimension mismatch");
  if (strengths.rows() != n || strengths.cols() != K) {
    throw InvalidInput("apply_strengths: strengths must be n×K");
  }
  Matrix out(n, d);
  for (Index i = 0; i < n; ++i) {
    const Vector x = base.row(i).transpose();
    if (exactness == Exactness::first_order) {
      Vector y = x;
      for (Index k = 0; k < K; ++k) y += strengths(i, k) * (gens[k] * x);
      out.row(i) = y.transpose();
    } else {
      // exp(t_1 A_1)···exp(t_K A_K) x: apply the last factor first.
      Vector y = x;
      for (Index k = K - 1; k >= 0; --k) y = matrix_exp(gens[k], strengths(i, k)) * y;
      out.row(i) = y.transpose();
    }
  }
  return out;
}

SyntheticPairs generate_pairs(const SyntheticSpec& spec, const Dataset& base) {
  spec.validate();
  if (base.d() != spec.dimension()) {
    throw InvalidInput("generate_pairs: base dimension " + std::to_string(base.d()) +
                       " does not match spec dimension " + std::to_string(spec.dimension()));
  }
  GeneratorSet truth = make_generators(spec);
  auto rng = make_rng(spec.seed, 1);
  Matrix t = draw_strengths(base.n(), spec.K, spec.strength_low, spec.strength_high, rng);
  Matrix neighbor = apply_strengths(base.points(), truth, t, spec.exactness);
  return {PairSet(base.points(), std::move(neighbor), Provenance::synthetic, std::move(t)),
          std::move(truth)};
}

}  // namespace lietrans
