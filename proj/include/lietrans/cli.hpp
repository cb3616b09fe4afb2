#pragma once

namespace lietrans::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the lietrans command-line tool.
int run(int argc, char** argv);

}  // namespace lietrans::cli
