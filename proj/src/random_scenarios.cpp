#include "qheat/random_scenarios.hpp"

#include <cmath>

#include "qheat/errors.hpp"

namespace qheat::random {

namespace {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int integer(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Matrix projector(std::size_t d, Eigen::Index i, Eigen::Index j) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

SpectralFunction random_coupling(Rng& rng) {
  switch (integer(rng, 0, 3)) {
    case 0:
      return SpectralFunction::constant(uniform(rng, 0.05, 1.0));
    case 1:
      return SpectralFunction::power_law(uniform(rng, 0.05, 1.0), uniform(rng, 0.0, 3.0));
    case 2: {
      const double lo = uniform(rng, 0.0, 2.0);
      return SpectralFunction::band(lo, lo + uniform(rng, 0.5, 3.0), uniform(rng, 0.1, 1.0),
                                    uniform(rng, 0.0, 0.1));
    }
    default:
      return SpectralFunction::notch(uniform(rng, 0.5, 3.0), uniform(rng, 0.05, 0.5),
                                     uniform(rng, 0.0, 1.0), uniform(rng, 0.1, 1.0));
  }
}

BathModel random_thermal_bath(Rng& rng) {
  return BathModel::thermal(uniform(rng, 0.2, 5.0), random_coupling(rng));
}

BathModel random_bath(Rng& rng) {
  switch (integer(rng, 0, 5)) {
    case 0:
      return random_thermal_bath(rng);
    case 1:
      return BathModel::population(random_coupling(rng),
                                   SpectralFunction::power_law(uniform(rng, 0.1, 3.0),
                                                               -uniform(rng, 0.0, 2.0)));
    case 2:
      return BathModel::filtered(random_thermal_bath(rng),
                                 SpectralFunction::notch(uniform(rng, 0.5, 3.0),
                                                         uniform(rng, 0.05, 0.5),
                                                         uniform(rng, 0.0, 1.0), 1.0));
    case 3:
      return BathModel::displaced(random_coupling(rng),
                                  SpectralFunction::band(uniform(rng, 0.0, 1.5), uniform(rng, 1.5, 4.0),
                                                         uniform(rng, 0.0, 2.0), uniform(rng, 0.0, 0.2)));
    case 4:
      return BathModel::squeezed_thermal(random_coupling(rng), uniform(rng, 0.2, 5.0),
                                         SpectralFunction::constant(uniform(rng, 0.0, 1.0)));
    default:
      return BathModel::composite({random_thermal_bath(rng), random_thermal_bath(rng)});
  }
}

Modulation random_modulation(Rng& rng, double frequency) {
  std::map<int, double> weights;
  const int count = integer(rng, 2, 7);
  while (static_cast<int>(weights.size()) < count) {
    weights[integer(rng, -3, 3)] = uniform(rng, 0.01, 1.0);
  }
  double total = 0.0;
  for (const auto& [q, p] : weights) {
    total += p;
  }
  for (auto& [q, p] : weights) {
    p /= total;
  }
  return Modulation(frequency, std::move(weights));
}

TlsMachine random_tls_machine(Rng& rng) {
  const double omega0 = uniform(rng, 1.0, 3.0);
  const double frequency = uniform(rng, 0.05, 0.3) * omega0;
  std::vector<LabeledBath> baths;
  const int n = integer(rng, 1, 3);
  for (int i = 0; i < n; ++i) {
    baths.push_back({"b" + std::to_string(i), random_bath(rng)});
  }
  return TlsMachine(omega0, random_modulation(rng, frequency), std::move(baths));
}

TlsMachine random_thermal_machine(Rng& rng) {
  const double omega0 = uniform(rng, 1.0, 3.0);
  const double frequency = uniform(rng, 0.05, 0.3) * omega0;
  return TlsMachine(omega0, random_modulation(rng, frequency), {{"bath", random_thermal_bath(rng)}});
}

TlsMachine random_tls_engine(Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double omega0 = uniform(rng, 1.0, 3.0);
    const double frequency = uniform(rng, 0.05, 0.3) * omega0;
    Modulation mod = random_modulation(rng, frequency);
    // hot bath sees the upper harmonics, cold bath the lower ones, with some
    // random leakage between the bands
    const double split = omega0 + (integer(rng, -2, 2) + 0.5) * frequency;
    const double th = uniform(rng, 0.5, 5.0);
    const double tc = th * uniform(rng, 0.05, 0.9);
    const double leak = integer(rng, 0, 1) == 0 ? 0.0 : uniform(rng, 0.0, 0.05);
    auto hot = BathModel::thermal(th, SpectralFunction::band(split, 100.0, uniform(rng, 0.1, 1.0), leak));
    auto cold = BathModel::thermal(tc, SpectralFunction::band(0.0, split, uniform(rng, 0.1, 1.0), leak));
    TlsMachine m(omega0, std::move(mod), {{"hot", hot}, {"cold", cold}});
    try {
      if (power(m) < -1e-9 * current_scale(m)) {
        return m;
      }
    } catch (const NoCoupling&) {
    }
  }
  throw InvalidArgument("no engine found after 10000 draws");
}

FloquetMachine random_three_level(Rng& rng, bool engine) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double w1 = uniform(rng, 1.0, 2.0);
    const double w2 = w1 + uniform(rng, 1.0, 2.0);
    const double drive = uniform(rng, 0.02, 0.2);
    const double frequency = (w2 - w1) + uniform(rng, -0.1, 0.1);
    Matrix h0 = Matrix::Zero(3, 3);
    h0(1, 1) = w1;
    h0(2, 2) = w2;
    // drive term in e^{-i m Omega t}: H_{-1} = g |1><2|, H_{1} = g |2><1|
    const Matrix down = drive * projector(3, 1, 2);
    PeriodicHamiltonian h(frequency, {{0, h0}, {-1, down}, {1, Matrix(down.adjoint())}});

    const double th = uniform(rng, 1.0, 5.0);
    const double tc = th * uniform(rng, 0.05, 0.8);
    const double width = 0.5 * std::min(w1, w2 - w1);
    auto hot = BathModel::thermal(
        th, SpectralFunction::band(w2 - width, w2 + width, uniform(rng, 0.05, 0.5), 0.0));
    auto cold = BathModel::thermal(
        tc, SpectralFunction::band(w1 - width, w1 + width, uniform(rng, 0.05, 0.5), 0.0));
    FloquetMachine m{h,
                     {{"hot", projector(3, 0, 2) + projector(3, 2, 0), hot},
                      {"cold", projector(3, 0, 1) + projector(3, 1, 0), cold}},
                     5,
                     256};
    if (!engine) {
      return m;
    }
    try {
      const auto dec = floquet_decompose(propagate_period(m.hamiltonian, m.samples));
      const auto gen = build_generator(coupling_channels(dec, m.couplings, m.q_max));
      const auto report = thermo_report(gen);
      if (report.engine) {
        return m;
      }
    } catch (const Error&) {
    }
  }
  throw InvalidArgument("no three-level engine found after 1000 draws");
}

Matrix random_density_matrix(Rng& rng, std::size_t dimension) {
  const auto d = static_cast<Eigen::Index>(dimension);
  std::normal_distribution<double> normal;
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      a(i, j) = Complex(normal(rng), normal(rng));
    }
  }
  Matrix rho = a * a.adjoint();
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace qheat::random
