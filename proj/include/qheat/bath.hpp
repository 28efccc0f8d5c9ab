#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qheat/spectral_function.hpp"

namespace qheat {

enum class BathKind { Thermal, Population, Filtered, Displaced, SqueezedThermal, Composite };

std::string to_string(BathKind kind);

/// Mean occupation of a bosonic mode at temperature T.
double bose_occupation(double omega, double temperature);

/// A stationary bosonic bath reduced to its coupling spectrum.
///
/// Every variant is described at a positive frequency w by a coupling density
/// g(w) and an absorption density g(w) n(w). Emission is g (n + 1), so
/// G(w) - G(-w) = g(w) exactly; the exponent is computed from that difference
/// to keep full relative precision when n is large.
///
/// Values are immutable and cheap to copy (shared structure).
class BathModel {
 public:
  struct Rates {
    double coupling;    ///< g(w)
    double absorption;  ///< g(w) n(w) = G(-w)
    double emission() const { return coupling + absorption; }
  };

  static BathModel thermal(double temperature, SpectralFunction coupling);
  static BathModel population(SpectralFunction coupling, SpectralFunction occupation);
  /// Replaces n(w) of `inner` by filter(w) n(w).
  static BathModel filtered(BathModel inner, SpectralFunction filter);
  /// Phase-averaged multimode coherent state, n(w) = |z(w)|^2.
  static BathModel displaced(SpectralFunction coupling, SpectralFunction z2);
  /// n(w) = n_T + (2 n_T + 1) sinh^2 r(w).
  static BathModel squeezed_thermal(SpectralFunction coupling, double temperature,
                                    SpectralFunction squeezing);
  static BathModel composite(std::vector<BathModel> parts);

  BathKind kind() const;

  /// Rates at |omega|; omega must be positive.
  Rates rates(double omega) const;

  /// Equilibrium temperature for Thermal baths.
  std::optional<double> equilibrium_temperature() const;

  std::string describe() const;

  struct Node;

 private:
  explicit BathModel(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// G(omega): emission for omega > 0, absorption for omega < 0.
double coupling_spectrum(const BathModel& bath, double omega);

/// omega / T_B(omega) = ln(G(omega) / G(-omega)) for omega > 0; +inf when the
/// absorption vanishes. Throws UndefinedChannel when G(omega) = 0.
double boltzmann_exponent(const BathModel& bath, double omega);

/// Odd extension to omega < 0: x(-w) = -x(w), so omega / x(omega) is even.
double signed_boltzmann_exponent(const BathModel& bath, double omega);

enum class TemperatureKind { Finite, Zero, Infinite, Negative };

struct LocalTemperature {
  double value;
  TemperatureKind kind;
};

LocalTemperature local_temperature(const BathModel& bath, double omega);

/// Central difference of boltzmann_exponent; step <= 0 selects
/// max(1e-6 omega, 1e-9).
double passivity_function(const BathModel& bath, double omega, double step = 0.0);

enum class Passivity { Passive, NonPassive, Indeterminate };

std::string to_string(Passivity verdict);

struct PassivityVerdict {
  Passivity verdict;
  /// (w_a, w_b), w_a < w_b, with x(w_a) > x(w_b).
  std::optional<std::pair<double, double>> witness;
  std::vector<double> grid;
};

/// Grid-relative classification; the verdict says nothing about frequencies
/// between grid points.
PassivityVerdict classify_passivity(const BathModel& bath, std::span<const double> grid);

/// Largest filter factor at omega_lo (omega_hi unfiltered) that still allows
/// a two-channel engine on a thermal bath to extract work.
double filter_threshold(double temperature, double omega_hi, double omega_lo);

/// n(omega_hi) (e^{omega_hi/T} - e^{omega_lo/T}); equals 1 - filter_threshold.
double deviation_threshold(double temperature, double omega_hi, double omega_lo);

/// True when D = 1 - lambda(omega_lo) is large enough to extract work.
bool deviation_condition(double temperature, double omega_hi, double omega_lo, double deviation);

}  // namespace qheat
