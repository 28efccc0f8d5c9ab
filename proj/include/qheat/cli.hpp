#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace qheat::cli {

/// Exit codes shared by all commands.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,      ///< verification failure or numerical breakdown
  kBadConfig = 2,
  kRegime = 3,       ///< machine outside the regime a quantity needs
  kNonErgodic = 4,
};

struct Options {
  std::optional<std::filesystem::path> scenario;
  std::optional<std::filesystem::path> out;
  std::optional<std::string> grid;
  std::uint64_t seed = 1;
  std::size_t count = 100;
  std::optional<int> q_max;
  std::optional<std::size_t> samples;
  /// "" or "rate-sign"
  std::string inject_fault;
};

/// One CSV file per requested bath: omega, G(omega), G(-omega), T_B, f.
int run_spectrum(const Options& options, std::ostream& out, std::ostream& err);
/// tls_channels.csv, tls_summary.csv and, with a sweep, tls_sweep.csv.
int run_tls(const Options& options, std::ostream& out, std::ostream& err);
/// floquet_channels.csv, floquet_summary.csv and floquet_laws.txt.
int run_floquet(const Options& options, std::ostream& out, std::ostream& err);
/// Randomized property suites; with a scenario, also its own law checks.
int run_verify(const Options& options, std::ostream& out, std::ostream& err);

}  // namespace qheat::cli
