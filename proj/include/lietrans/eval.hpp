#pragma once

#include "lietrans/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace lietrans {

/// Largest singular value. Dense SVD for d <= 64, power iteration otherwise.
double operator_norm(const Matrix& m);

/// Scales every nonzero generator to unit operator norm.
GeneratorSet normalize_generators(const GeneratorSet& gens);

struct MatchReport {
  std::vector<Index> permutation;  // truth k is matched to estimate permutation[k]
  std::vector<int> signs;          // sign applied to the matched estimate
  std::vector<double> per_transform_error;
  double total = 0.0;
};

/// Minimum-cost injection of truth into estimates under sign-resolved
/// operator-norm distance between normalized generators. Needs
/// K_est >= K_truth and K_truth <= 6.
MatchReport matched_error(const GeneratorSet& est, const GeneratorSet& truth);

nlohmann::json to_json(const MatchReport& report);

struct BatchRow {
  std::uint64_t seed = 0;
  std::string method;
  double total_error = 0.0;
  double runtime_seconds = 0.0;
};

/// CSV with header seed,method,total_error,runtime_seconds.
void write_batch_csv(const std::filesystem::path& path, const std::vector<BatchRow>& rows);

}  // namespace lietrans
