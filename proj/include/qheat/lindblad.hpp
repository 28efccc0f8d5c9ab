#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qheat/bath.hpp"
#include "qheat/floquet.hpp"
#include "qheat/thermo.hpp"

namespace qheat {

/// System operator S (Hermitian) coupled to a bath.
struct Coupling {
  std::string label;
  Matrix op;
  BathModel bath;
};

/// One dissipation channel (alpha, omega_bar_q).
struct Channel {
  std::string label;
  double bohr;       ///< omega_bar >= 0
  int q;
  double frequency;  ///< omega_bar + q Omega, may be negative
  Matrix jump;       ///< S_alpha(omega_bar_q), computational basis
  double emission;   ///< G(omega_bar_q)
  double absorption; ///< G(-omega_bar_q)
  /// omega_bar_q / T = ln(emission / absorption); +-inf when one rate vanishes.
  double exponent;

  /// 1 / T_alpha(omega_bar_q); zero-frequency channels report 0.
  double inverse_temperature() const;
};

struct ChannelSet {
  std::size_t dimension = 0;
  double frequency = 0.0;  ///< driving frequency Omega
  Matrix averaged_hamiltonian;
  Matrix eigenbasis;
  RealVector quasi_energies;
  std::vector<Channel> channels;
  std::vector<std::string> warnings;
  /// Worst jump-operator diagnostics over all couplings.
  double truncation_residual = 0.0;
  double sampling_residual = 0.0;
  double adjoint_residual = 0.0;
  double commutator_residual = 0.0;
};

/// Channels of every coupling. Channels at zero frequency have no defined
/// rate and are dropped with a warning, as are channels with both rates zero.
ChannelSet coupling_channels(const FloquetDecomposition& dec, const std::vector<Coupling>& couplings,
                             int q_max = 5);

/// Deliberate corruption used to exercise the verification suites.
enum class Fault { None, SwapRates };

struct GeneratorDecomposition {
  ChannelSet channels;
  std::vector<Matrix> blocks;  ///< d^2 x d^2, column-stacking convention
  Matrix total;

  std::size_t dimension() const { return channels.dimension; }
};

/// G(w) D[S] + G(-w) D[S^dagger] per channel, D[A] rho = A rho A^dagger -
/// {A^dagger A, rho}/2.
GeneratorDecomposition build_generator(ChannelSet channels, Fault fault = Fault::None);

/// Stationary state of a single channel, proportional to exp(-(x/omega_bar) Hbar).
/// Zero-frequency channels use the maximally mixed state.
Matrix gibbs_like_state(const ChannelSet& set, const Channel& channel);

struct StationaryState {
  Matrix rho;
  /// Largest off-diagonal magnitude in the Floquet basis.
  double off_diagonal = 0.0;
  double clipped = 0.0;  ///< most negative eigenvalue removed by clipping
};

/// Throws NonErgodic when the kernel of the generator is not one-dimensional.
StationaryState stationary_state(const GeneratorDecomposition& gen);

/// Interaction-picture state e^{tL} rho0.
Matrix evolve(const GeneratorDecomposition& gen, const Matrix& rho0, double t);
/// Schroedinger-picture state U(t) rho(t) U(t)^dagger.
Matrix evolve_schrodinger(const GeneratorDecomposition& gen, const FloquetDecomposition& dec,
                          const Matrix& rho0, double t);

struct ChannelReport {
  std::string label;
  double bohr;
  int q;
  double frequency;
  double current;
  double inverse_temperature;
  double entropy_production;
};

struct LawCheck {
  std::string name;
  double value;
  double tolerance;
  bool passed;
};

struct ThermoReport {
  StationaryState steady;
  std::vector<ChannelReport> channels;
  double power = 0.0;
  EffectiveTemperatures temperatures;
  bool engine = false;
  double efficiency = 0.0;  ///< NaN outside the engine regime
  double second_law = 0.0;  ///< sum J / T
  double carnot_slack = 0.0;
  double rate_scale = 0.0;
  double energy_scale = 0.0;
  std::vector<LawCheck> laws;

  bool all_passed() const;
};

ThermoReport thermo_report(const GeneratorDecomposition& gen);

struct EntropyRecord {
  double time;
  double entropy;
  double rate;        ///< central difference of the entropy
  double exact_rate;  ///< -Tr(L rho ln rho)
  double flow;        ///< sum of J / T
  double production;  ///< sum of sigma
  double min_production;
  double residual;    ///< |rate - flow - production|
};

/// One record per interior trajectory point (central differences).
/// Throws SpohnViolation when a channel's entropy production drops below -1e-6.
std::vector<EntropyRecord> entropy_balance(const GeneratorDecomposition& gen,
                                           const std::vector<Matrix>& trajectory, double dt);

/// Tolerance for the entropy-balance residual at step dt.
double entropy_balance_tolerance(const GeneratorDecomposition& gen, double dt);

/// sigma_c = -Tr(L_c rho [ln rho - ln rho_c]) per channel.
std::vector<double> entropy_production(const GeneratorDecomposition& gen, const Matrix& rho);

}  // namespace qheat
