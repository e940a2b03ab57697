#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "scdt/geodesy.hpp"
#include "scdt/transform.hpp"

namespace scdt::cli {

/// Settings shared by every subcommand.
struct CliConfig {
  ReferenceSpec reference;
  std::vector<double> alphas = default_alphas();
  double tolerance = kDefaultOverlapTolerance;
  std::uint64_t seed = 0;
  /// Default for written files; SCDT_OUT_DIR, else the working directory.
  std::filesystem::path out_dir;
  int verbosity = 0;
  bool json = false;
  /// Sample count of generated demo signals.
  std::size_t resolution = 1000;

  /// Throws ValidationError for reference resolutions below 64 or an invalid
  /// alpha grid.
  void validate() const;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;

/// Runs the command line. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scdt::cli
