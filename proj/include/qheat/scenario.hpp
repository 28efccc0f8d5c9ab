#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qheat/bath.hpp"
#include "qheat/floquet.hpp"
#include "qheat/lindblad.hpp"
#include "qheat/tls_engine.hpp"

namespace qheat {

/// Linear grid written as start:stop:count (count points, both ends included).
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 0;

  static Grid parse(const std::string& text);
  std::vector<double> points() const;
};

struct TlsSpec {
  double omega0;
  Modulation modulation;
  std::vector<std::string> baths;
  HarmonicPolicy policy;
};

struct CouplingSpec {
  std::string label;
  Matrix op;
  std::string bath;
};

struct FloquetSpec {
  PeriodicHamiltonian hamiltonian;
  std::vector<CouplingSpec> couplings;
  int q_max = 5;
  std::size_t samples = 1024;
};

/// One-parameter sweep of the TLS machine.
struct Sweep {
  std::string parameter;  ///< "omega0" or "Omega"
  Grid grid;
};

struct Scenario {
  std::string name;
  std::filesystem::path path;
  std::uint64_t hash = 0;

  std::vector<LabeledBath> baths;
  std::optional<TlsSpec> tls;
  std::optional<FloquetSpec> floquet;

  std::vector<std::string> spectrum_baths;
  std::optional<Grid> spectrum_grid;
  std::optional<Sweep> sweep;

  std::filesystem::path output_dir;
  std::string unit_label;

  const BathModel& bath(const std::string& label) const;
  /// The TLS machine; `omega0` and `frequency` override the configured values.
  TlsMachine tls_machine(std::optional<double> omega0 = std::nullopt,
                         std::optional<double> frequency = std::nullopt) const;
  std::vector<Coupling> couplings() const;
  std::string hash_hex() const;
};

/// Throws ConfigError for unreadable files, malformed YAML, unknown keys in
/// typed sections, dangling bath references and invalid physics parameters.
Scenario load_scenario(const std::filesystem::path& path);
/// `base` resolves relative CSV paths.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base = ".");

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace qheat
