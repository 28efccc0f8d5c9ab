#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qheat/lindblad.hpp"

namespace qheat {

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t count = 100;
  Fault fault = Fault::None;
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  /// Largest violation seen, in the suite's normalized units.
  double worst = 0.0;
  /// First failure, if any.
  std::string diagnostic;

  bool passed() const { return failures == 0 && cases > 0; }
};

/// Randomized invariant checks; each suite draws `count` cases from its own
/// stream derived from the seed, so suites are independent of each other's
/// case counts.
std::vector<SuiteResult> run_property_suites(const SuiteOptions& options);

SuiteResult route_identity_suite(std::uint64_t seed, std::size_t count);
SuiteResult no_free_work_suite(std::uint64_t seed, std::size_t count);
SuiteResult work_condition_suite(std::uint64_t seed, std::size_t count);
SuiteResult tls_carnot_suite(std::uint64_t seed, std::size_t count);
SuiteResult floquet_laws_suite(std::uint64_t seed, std::size_t count, Fault fault = Fault::None);
SuiteResult spohn_suite(std::uint64_t seed, std::size_t count, Fault fault = Fault::None);
SuiteResult kms_suite(std::uint64_t seed, std::size_t count);

}  // namespace qheat
