#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "qheat/bath.hpp"
#include "qheat/floquet.hpp"
#include "qheat/lindblad.hpp"
#include "qheat/tls_engine.hpp"

// Seeded generators for the property suites. Everything draws from one
// mt19937_64 so a single seed reproduces a whole run.
namespace qheat::random {

using Rng = std::mt19937_64;

SpectralFunction random_coupling(Rng& rng);
/// Any bath kind, composites nested one level deep.
BathModel random_bath(Rng& rng);
BathModel random_thermal_bath(Rng& rng);
/// Weights on q in [-3, 3] (at least two harmonics).
Modulation random_modulation(Rng& rng, double frequency);

/// omega0 in [1, 3], Omega in [0.05, 0.3] omega0, 1-3 arbitrary baths.
TlsMachine random_tls_machine(Rng& rng);
/// Same but with a single thermal bath.
TlsMachine random_thermal_machine(Rng& rng);
/// Two thermal baths with band-limited couplings, rejection-sampled into the
/// work-extraction regime.
TlsMachine random_tls_engine(Rng& rng);

struct FloquetMachine {
  PeriodicHamiltonian hamiltonian;
  std::vector<Coupling> couplings;
  int q_max;
  std::size_t samples;
};

/// Three-level maser: levels 0 < w1 < w2, drive on 1-2, hot bath on 0-2 and
/// cold bath on 0-1. With `engine` the draw is repeated until P < 0.
FloquetMachine random_three_level(Rng& rng, bool engine = true);

/// Haar-like random state of full rank.
Matrix random_density_matrix(Rng& rng, std::size_t dimension);

}  // namespace qheat::random
