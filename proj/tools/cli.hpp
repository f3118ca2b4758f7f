#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace kdv::cli {

struct RunConfig {
  std::string command;
  std::optional<int> grid_size;
  std::optional<double> dt;
  std::optional<double> horizon;
  double mu = 1e-3;
  double radius = 1e-2;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string dump_manifold;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs one stage (or all of them) and returns the exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses flags (and an optional --config JSON file, overridden by flags),
/// then calls run(). Usage errors return 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kdv::cli
