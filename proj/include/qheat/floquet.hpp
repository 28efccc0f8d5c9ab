#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qheat/linalg.hpp"

namespace qheat {

/// H(t) = sum_m H_m e^{-i m Omega t} with H_{-m} = H_m^dagger.
class PeriodicHamiltonian {
 public:
  PeriodicHamiltonian(double frequency, std::map<int, Matrix> terms);

  /// Time-independent Hamiltonian viewed as periodic with the given frequency.
  static PeriodicHamiltonian constant(double frequency, const Matrix& h);

  std::size_t dimension() const { return dimension_; }
  double frequency() const { return frequency_; }
  double period() const;
  const std::map<int, Matrix>& terms() const { return terms_; }

  Matrix at(double t) const;

 private:
  double frequency_;
  std::size_t dimension_;
  std::map<int, Matrix> terms_;
};

enum class Integrator {
  /// exp(-i H(t + dt/2) dt) per step; second order.
  Midpoint,
  /// Two-point Gauss-Legendre Magnus expansion with the commutator term;
  /// fourth order.
  Magnus4,
};

/// One period of the propagator U(t) = P(t) e^{-i Hbar t}, sampled at
/// t_j = j tau / N for j = 0..N, plus (after floquet_decompose) the
/// quasi-energies in [0, Omega) and the averaged Hamiltonian.
struct FloquetDecomposition {
  PeriodicHamiltonian hamiltonian;
  Integrator integrator;
  std::vector<Matrix> propagators;
  Matrix monodromy;
  RealVector quasi_energies;  ///< empty until decomposed
  Matrix eigenbasis;          ///< columns are the Floquet states phi_k
  Matrix averaged_hamiltonian;

  std::size_t samples() const { return propagators.size() - 1; }
  std::size_t dimension() const { return hamiltonian.dimension(); }
  double frequency() const { return hamiltonian.frequency(); }
  double time(std::size_t j) const;
  bool complete() const { return quasi_energies.size() > 0; }

  /// P(t_j) = U(t_j) e^{+i Hbar t_j}.
  Matrix micromotion(std::size_t j) const;
  /// U(t) for any t >= 0 (one extra integrator step from the nearest sample).
  Matrix propagator_at(double t) const;

  /// max_j ||U(t_j) U(t_j)^dagger - 1||
  double unitarity_defect() const;
  /// ||U(tau) - e^{-i Hbar tau}||
  double monodromy_defect() const;
  /// ||P(tau) - P(0)||
  double periodicity_defect() const;
};

FloquetDecomposition propagate_period(const PeriodicHamiltonian& hamiltonian,
                                      std::size_t samples = 1024,
                                      Integrator integrator = Integrator::Magnus4);

/// Eigen-decomposes the monodromy (complex Schur, so the basis stays
/// orthonormal inside degenerate eigenspaces).
FloquetDecomposition floquet_decompose(FloquetDecomposition dec);

/// Channel frequency omega_bar + q Omega with omega_bar >= 0 a clustered
/// quasi-energy difference; for omega_bar = 0 only q >= 0 is listed.
struct BohrChannel {
  double bohr;
  int q;
  double frequency;
  std::size_t multiplicity;  ///< (k, l) pairs in the Bohr cluster
};

std::vector<BohrChannel> bohr_spectrum(const FloquetDecomposition& dec, int q_max = 5);

/// One harmonic component S(omega_bar_q) of U(t)^dagger S U(t).
struct JumpComponent {
  double bohr;
  int q;
  double frequency;
  Matrix op;
};

struct JumpDecomposition {
  std::vector<JumpComponent> components;
  /// Reconstruction of U^dagger S U at every sample from the retained
  /// components (|q| <= q_max), relative to ||S||.
  double truncation_residual = 0.0;
  /// Same over the alias-free band |m| <= N/4.
  double sampling_residual = 0.0;
  /// max ||S(-omega_bar_q) - S(omega_bar_q)^dagger||
  double adjoint_residual = 0.0;
  /// max ||[Hbar, S(omega_bar_q)] + omega_bar S(omega_bar_q)||
  double commutator_residual = 0.0;
  std::vector<std::string> warnings;
};

/// Throws InsufficientSampling when the sampling residual exceeds 1e-6.
JumpDecomposition jump_operators(const FloquetDecomposition& dec, const Matrix& coupling,
                                 int q_max = 5);

/// Clustering tolerance for quasi-energy differences, 1e-8 Omega.
double cluster_tolerance(const FloquetDecomposition& dec);

}  // namespace qheat
