#pragma once

#include "lietrans/types.hpp"

#include <random>

namespace lietrans {

/// [[0,−1],[1,0]]: generator of planar rotations.
Matrix rotation_generator_2d();

enum class Axis { horizontal, vertical };

/// S − I for the one-pixel shift S with zero fill, pixels in row-major order.
Matrix image_translation_generator(int side, Axis axis);

/// Interpolation matrix that rotates a side×side image by theta about its
/// center. Uses cubic convolution (Keys, a = −1/2), which is C¹ in theta.
Matrix image_rotation_matrix(int side, double theta);

/// (R_ε − R_{−ε}) / 2ε.
Matrix image_rotation_generator(int side, double epsilon = 1e-4);

/// Ground-truth generator for one transform kind.
Matrix make_generator(const TransformSpec& kind, int side);

/// All generators of a spec, in spec order.
GeneratorSet make_generators(const SyntheticSpec& spec);

/// Base points for a spec: isotropic Gaussian vectors, or smooth random
/// images (blurred white noise with unit pixel variance) for grid kinds.
Dataset make_base_dataset(const SyntheticSpec& spec);

/// n×K strengths with |t| ~ U[low, high] and an independent random sign.
Matrix draw_strengths(Index n, Index K, double low, double high, std::mt19937_64& rng);

/// Neighbor rows for given strengths. Exponential mode applies
/// exp(t_1 A_1)···exp(t_K A_K) to each base point.
Matrix apply_strengths(const Matrix& base, const GeneratorSet& gens, const Matrix& strengths,
                       Exactness exactness);

struct SyntheticPairs {
  PairSet pairs;
  GeneratorSet truth;
};

SyntheticPairs generate_pairs(const SyntheticSpec& spec, const Dataset& base);

}  // namespace lietrans
