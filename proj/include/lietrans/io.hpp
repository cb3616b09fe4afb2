#pragma once

#include "lietrans/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace lietrans::io {

namespace fs = std::filesystem;

/// Headerless CSV, 17 significant digits in scientific notation.
void write_csv(const fs::path& path, const Matrix& m);
/// Same with a single header line.
void write_csv(const fs::path& path, const Matrix& m, const std::vector<std::string>& header);
/// Reads a numeric CSV; a non-numeric first line is treated as a header.
/// Throws InvalidInput on missing files, ragged rows, or bad numbers.
Matrix read_csv(const fs::path& path);

std::string format_double(double v);

/// Binary PGM (P5, maxval 255).
void write_pgm(const fs::path& path, const Eigen::Matrix<unsigned char, Eigen::Dynamic, Eigen::Dynamic>& pixels);
/// Pixels of a P5/P2 PGM as doubles in [0, maxval].
Matrix read_pgm(const fs::path& path);

/// Affine map [lo, hi] → [0, 255] with clamping.
Eigen::Matrix<unsigned char, Eigen::Dynamic, Eigen::Dynamic> to_gray(const Matrix& img, double lo,
                                                                     double hi);

/// Row-major side×side image from a length-side² row.
Matrix as_image(const Eigen::Ref<const Vector>& row, int side);

SyntheticSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const SyntheticSpec& spec);

nlohmann::json read_json(const fs::path& path);
void write_json(const fs::path& path, const nlohmann::json& j);

/// Writes <prefix>_1.csv … <prefix>_K.csv.
void write_generators(const fs::path& dir, const GeneratorSet& gens, const std::string& prefix);
/// Loads gen_k.csv files, falling back to truth_k.csv.
GeneratorSet read_generators(const fs::path& dir);

}  // namespace lietrans::io
