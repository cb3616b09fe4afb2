#include "lietrans/types.hpp"

#include "lietrans/error.hpp"

#include <cmath>

namespace lietrans {

Dataset::Dataset(Matrix points, std::optional<int> grid_side)
    : points_(std::move(points)), grid_side_(grid_side) {
  if (points_.rows() < 1 || points_.cols() < 1) throw InvalidInput("dataset must be non-empty");
  if (!points_.allFinite()) throw InvalidInput("dataset contains non-finite entries");
  if (grid_side_ && Index(*grid_side_) * Index(*grid_side_) != points_.cols()) {
    throw InvalidInput("grid side " + std::to_string(*grid_side_) +
                       " does not match dimension " + std::to_string(points_.cols()));
  }
}

PairSet::PairSet(Matrix base, Matrix neighbor, Provenance provenance,
                 std::optional<Matrix> strengths)
    : base_(std::move(base)),
      neighbor_(std::move(neighbor)),
      strengths_(std::move(strengths)),
      provenance_(provenance) {
  if (base_.rows() != neighbor_.rows() || base_.cols() != neighbor_.cols()) {
    throw InvalidInput("base and neighbor shapes differ");
  }
  if (provenance_ == Provenance::synthetic) {
    if (!strengths_) throw InvalidInput("synthetic pairs require strengths");
  }
  if (strengths_) {
    if (strengths_->rows() != base_.rows()) throw InvalidInput("strengths row count mismatch");
    if (!strengths_->allFinite()) throw InvalidInput("strengths contain non-finite entries");
  }
}

GeneratorSet::GeneratorSet(std::vector<Matrix> generators, bool normalized)
    : generators_(std::move(generators)), normalized_(normalized) {
  if (generators_.empty()) throw InvalidInput("generator set must contain at least one matrix");
  const Index d = generators_.front().rows();
  for (const auto& a : generators_) {
    if (a.rows() != d || a.cols() != d) throw InvalidInput("generators must be square and same size");
    if (!a.allFinite()) throw InvalidInput("generator contains non-finite entries");
  }
}

GeneratorSet WhitenTransform::unwhiten(const GeneratorSet& gens) const {
  std::vector<Matrix> out;
  out.reserve(gens.K());
  for (const auto& a : gens.generators()) out.push_back(unwhiten_generator(a));
  return GeneratorSet(std::move(out));
}

GeneratorSet WhitenTransform::whiten(const GeneratorSet& gens) const {
  std::vector<Matrix> out;
  out.reserve(gens.K());
  for (const auto& a : gens.generators()) out.push_back(whiten_generator(a));
  return GeneratorSet(std::move(out));
}

void SyntheticSpec::validate() const {
  if (kind.empty()) throw InvalidInput("synthetic spec needs at least one transform kind");
  if (K != static_cast<int>(kind.size())) {
    throw InvalidInput("K = " + std::to_string(K) + " but " + std::to_string(kind.size()) +
                       " transform kinds given");
  }
  if (!(strength_low > 0.0) || !(strength_low <= strength_high) || !std::isfinite(strength_high)) {
    throw InvalidInput("strength range must satisfy 0 < strength_low <= strength_high");
  }
  if (n < 1) throw InvalidInput("n must be at least 1");
  (void)dimension();
}

Index SyntheticSpec::dimension() const {
  Index d = -1;
  for (const auto& t : kind) {
    Index dk = 0;
    switch (t.kind) {
      case TransformKind::rotation2d:
        dk = 2;
        break;
      case TransformKind::image_rotation:
        if (side < 3) throw InvalidInput("image rotation needs side >= 3");
        dk = Index(side) * side;
        break;
      case TransformKind::translate_h:
      case TransformKind::translate_v:
        if (side < 2) throw InvalidInput("image translation needs side >= 2");
        dk = Index(side) * side;
        break;
      case TransformKind::custom:
        if (t.custom.rows() < 1 || t.custom.rows() != t.custom.cols()) {
          throw InvalidInput("custom generator must be a non-empty square matrix");
        }
        dk = t.custom.rows();
        break;
    }
    if (d >= 0 && dk != d) throw InvalidInput("transform kinds imply different dimensions");
    d = dk;
  }
  return d;
}

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::rotation2d: return "rotation2d";
    case TransformKind::image_rotation: return "image_rotation";
    case TransformKind::translate_h: return "translate_h";
    case TransformKind::translate_v: return "translate_v";
    case TransformKind::custom: return "custom";
  }
  return "unknown";
}

std::string to_string(Exactness e) {
  return e == Exactness::exponential ? "exponential" : "first_order";
}

std::string to_string(Provenance p) {
  return p == Provenance::synthetic ? "synthetic" : "nearest_neighbor";
}

}  // namespace lietrans
