#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qheat/bath.hpp"
#include "qheat/thermo.hpp"

namespace qheat {

/// Periodic frequency modulation of a two-level system, reduced to its
/// modulation frequency and the harmonic weights P_q = |xi_q|^2.
class Modulation {
 public:
  /// Weights must be non-negative and sum to one within 1e-9; zero weights
  /// are dropped.
  Modulation(double frequency, std::map<int, double> weights);

  static Modulation unmodulated(double frequency) { return Modulation(frequency, {{0, 1.0}}); }

  double frequency() const { return frequency_; }
  const std::map<int, double>& weights() const { return weights_; }

 private:
  double frequency_;
  std::map<int, double> weights_;
};

/// Harmonic weights of e^{-i phi(t)} for a tau-periodic phase phi(t) (the
/// integral of a zero-mean frequency modulation), sampled at `samples` points.
/// Weights below 1e-12 are dropped and the rest renormalized.
Modulation harmonics_from_phase(const std::function<double(double)>& phase, double frequency,
                                std::size_t samples = 1024);

struct LabeledBath {
  std::string label;
  BathModel bath;
};

/// Whether harmonics with omega_q = omega0 + q Omega < 0 are accepted. They
/// are physical (the bath absorbs at |omega_q|) but the default rejects them
/// so that a truncated modulation never silently reaches negative frequency.
enum class HarmonicPolicy { RejectNonPositive, AllowNegative };

class TlsMachine {
 public:
  TlsMachine(double omega0, Modulation modulation, std::vector<LabeledBath> baths,
             HarmonicPolicy policy = HarmonicPolicy::RejectNonPositive);

  double omega0() const { return omega0_; }
  const Modulation& modulation() const { return modulation_; }
  const std::vector<LabeledBath>& baths() const { return baths_; }
  HarmonicPolicy policy() const { return policy_; }

  double harmonic_frequency(int q) const { return omega0_ + q * modulation_.frequency(); }

  /// Sum over baths of G(omega).
  double total_spectrum(double omega) const;

 private:
  double omega0_;
  Modulation modulation_;
  std::vector<LabeledBath> baths_;
  HarmonicPolicy policy_;
};

struct ChannelCurrent {
  std::string bath;
  int q;
  double frequency;
  double current;
  /// Local temperature of this bath at omega_q; NaN when the bath does not
  /// couple there.
  double local_temperature;
  /// omega_q / T_loc, the odd extension for negative omega_q.
  double exponent;
};

/// rho_ee / rho_gg at steady state.
double steady_ratio(const TlsMachine& machine);

std::vector<ChannelCurrent> channel_currents(const TlsMachine& machine);

/// P = -sum J; negative means work is extracted.
double power(const TlsMachine& machine);

/// Same power from the pair formula over q1 > q2, using the combined spectrum
/// of all baths.
double pairwise_power(const TlsMachine& machine);

struct WorkCondition {
  bool satisfied;
  /// (q1, q2) with q1 > q2 and x(omega_q2) > x(omega_q1).
  std::vector<std::pair<int, int>> inverted_pairs;
  std::vector<std::pair<int, int>> regular_pairs;
};

/// Sufficient condition for work extraction, over harmonics that carry weight
/// and coupling.
WorkCondition work_condition(const TlsMachine& machine);

struct EfficiencyReport {
  double efficiency;
  double power;
  EffectiveTemperatures temperatures;
  /// efficiency <= temperatures.bound + 1e-9
  bool within_bound;
};

/// Throws RegimeError unless the machine extracts work.
EfficiencyReport efficiency(const TlsMachine& machine);

/// Natural scale of the currents: sum over channels of |omega_q| P_q (G(w) + G(-w)).
double current_scale(const TlsMachine& machine);

}  // namespace qheat
